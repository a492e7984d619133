#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "osc/piecewise.hpp"
#include "osc/problem.hpp"
#include "osc/quadrature.hpp"

namespace osc {

/// Numerical solution of a delay problem on [start, horizon], with the history
/// supplying x(t) for t <= start.
class Trajectory {
public:
    Trajectory(std::vector<double> t, std::vector<double> x, PiecewiseCellFunction history, double step);

    [[nodiscard]] std::span<const double> t() const { return t_; }
    [[nodiscard]] std::span<const double> x() const { return x_; }
    [[nodiscard]] const PiecewiseCellFunction& history() const { return history_; }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] double start() const { return t_.front(); }
    [[nodiscard]] double end() const { return t_.back(); }

    /// History for s <= start, linear interpolation of the stored nodes up to end().
    [[nodiscard]] double value(double s) const;

private:
    std::vector<double> t_;
    std::vector<double> x_;
    PiecewiseCellFunction history_;
    double step_;
};

/// History defaulting to x = 1 everywhere before the start.
[[nodiscard]] PiecewiseCellFunction unit_history();

/// Classical RK4 with the method of steps. Delayed values come from the history
/// (s <= start), linear interpolation of computed nodes, or, for s inside the
/// current step, the Euler predictor x_n + (s - t_n) k1. Steps land on every
/// coefficient/argument breakpoint; stage times on a step end read the left
/// one-sided limits of p_i and tau_i.
///
/// Throws DomainError for advanced-looking input (tau_i(t) > t), RangeError when
/// a lookup precedes the history, NumericalError on a non-finite state.
[[nodiscard]] Trajectory integrate_delay(const DelayProblem& problem, const PiecewiseCellFunction& history,
                                         double horizon, double h);

struct SignChanges {
    std::size_t count = 0;
    std::vector<std::pair<double, double>> brackets;  // [t_j, t_{j+1}] with x_j x_{j+1} < 0
    std::vector<double> zero_touches;                 // nodes with |x| < 1e-12
};

[[nodiscard]] SignChanges count_sign_changes(std::span<const double> t, std::span<const double> x);
[[nodiscard]] SignChanges count_sign_changes(const Trajectory& trajectory);

/// max |x'(t) + sum_i p_i(t) x(tau_i(t))| over grid nodes that are not
/// breakpoints of the candidate, with x' from the candidate's exact per-cell
/// derivative and x = history below the candidate's base start. Every candidate
/// breakpoint inside the grid must be a grid node (InputError otherwise).
[[nodiscard]] double residual_check(const DelayProblem& problem, const PiecewiseCellFunction& candidate,
                                    const PiecewiseCellFunction& history, const Grid& grid);

/// max over steps of |(x_{n+1} - x_n)/h_n + sum_i p_i(m) x(tau_i(m))| at the
/// step midpoint m, delayed values read from the trajectory.
[[nodiscard]] double discrete_residual(const DelayProblem& problem, const Trajectory& trajectory);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace osc
