#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "osc/piecewise.hpp"
#include "osc/problem.hpp"

namespace osc {

/// Strictly increasing nodes: a uniform step-h lattice merged with breakpoints.
class Grid {
public:
    Grid(std::vector<double> nodes, double step);

    [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] double operator[](std::size_t j) const { return nodes_[j]; }
    [[nodiscard]] double front() const { return nodes_.front(); }
    [[nodiscard]] double back() const { return nodes_.back(); }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] bool contains(double t) const;

    /// Index j with t_j <= t < t_{j+1} (the last segment for t == back()).
    [[nodiscard]] std::size_t segment(double t) const;
    /// Index of the node equal to t within rounding, if any.
    [[nodiscard]] std::optional<std::size_t> node_index(double t) const;

private:
    std::vector<double> nodes_;
    double step_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Uniform nodes span.lo + j*h (last node exactly span.hi) merged with the
/// given breakpoints; nodes closer than 1e-9*h collapse onto the breakpoint.
[[nodiscard]] GridPtr build_grid(Interval span, double h, std::span<const double> breakpoints = {});

/// Grid for a problem: starts at the problem's base start, ends at window.hi
/// (advanced problems: window.hi + (r_max + 2) * Delta_max, enough for the
/// envelope and every kernel level queried inside the window), and contains
/// every cell endpoint of every term in range.
[[nodiscard]] GridPtr build_grid(const Equation& equation, Interval window, double h, int r_max = 1);

/// f evaluated at t, as the one-sided limit from `side`.
using SegmentIntegrand = std::function<double(double t, Side side)>;

/// F_j ~ int_{t_0}^{t_j} f by the trapezoid rule on each grid segment using the
/// integrand's inner one-sided limits; exact for piecewise-affine integrands
/// whose breakpoints are nodes.
class CumulativeTable {
public:
    CumulativeTable(GridPtr grid, std::vector<double> values);

    [[nodiscard]] const Grid& grid() const { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] double at_node(std::size_t j) const { return values_[j]; }

    /// Linear interpolation between nodes; RangeError outside the grid.
    [[nodiscard]] double at(double t) const;
    /// Like at() but holds the end values constant outside the grid.
    [[nodiscard]] double at_clamped(double t) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

[[nodiscard]] CumulativeTable cumulative(GridPtr grid, const SegmentIntegrand& f);
[[nodiscard]] CumulativeTable cumulative(GridPtr grid, const PiecewiseCellFunction& f);

/// F(b) - F(a); antisymmetric.
[[nodiscard]] double integral_between(const CumulativeTable& table, double a, double b);

/// Trapezoid rule for int_a^b f over the grid segments intersecting [a, b];
/// partial end segments use f evaluated at a and b. Requires a <= b inside the grid.
[[nodiscard]] double integrate(const Grid& grid, double a, double b, const SegmentIntegrand& f);

}  // namespace osc
