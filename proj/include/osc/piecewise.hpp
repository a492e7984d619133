#pragma once

#include <optional>
#include <span>
#include <vector>

namespace osc {

/// How a cell turns its coefficients into a value.
///   Affine:      c0 + c1*t + c2*k
///   Exponential: c0 * exp(c1*t + c2*k)
/// Both forms are monotone inside a cell, so extrema over a cell sit at
/// its endpoints.
enum class CellForm { Affine, Exponential };

struct Cell {
    double lower = 0.0;  // absolute position inside the base window
    double upper = 0.0;  // +inf only for the final cell of an aperiodic function
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    CellForm form = CellForm::Affine;

    [[nodiscard]] double value(double t, long k) const;
    [[nodiscard]] double derivative(double t, long k) const;
    /// Change of the cell formula when t advances by one period (k advances by one).
    [[nodiscard]] double period_shift(double period) const;
    [[nodiscard]] bool is_constant() const { return c1 == 0.0 && c2 == 0.0; }
};

/// Which one-sided limit to take at a cell boundary.
enum class Side { Left, Right };

/// Cell-indexed function on [base_start, inf), optionally periodic.
///
/// With a period P the cells partition [t0, t0 + P) and the function is
/// extended by k = floor((t - t0) / P): a point t maps to the cell holding
/// t - k*P, and the cell formula is evaluated at the absolute t with that k.
/// Without a period the cells partition [t0, inf), the last one unbounded,
/// and k is always 0.
class PiecewiseCellFunction {
public:
    PiecewiseCellFunction(double base_start, std::optional<double> period, std::vector<Cell> cells);

    static PiecewiseCellFunction constant(double value, double base_start = 0.0);
    /// slope*t + intercept on [base_start, inf).
    static PiecewiseCellFunction affine(double slope, double intercept, double base_start = 0.0);

    [[nodiscard]] double base_start() const { return base_start_; }
    [[nodiscard]] const std::optional<double>& period() const { return period_; }
    [[nodiscard]] std::span<const Cell> cells() const { return cells_; }
    [[nodiscard]] bool is_affine() const;

    struct Location {
        std::size_t cell = 0;
        long k = 0;
    };

    /// Cell containing t. Side::Right uses [l, u) cells; Side::Left uses (l, u],
    /// i.e. the cell a point approaches from below.
    [[nodiscard]] Location locate(double t, Side side = Side::Right) const;

    [[nodiscard]] double operator()(double t) const { return eval(t, Side::Right); }
    [[nodiscard]] double eval(double t, Side side = Side::Right) const;
    [[nodiscard]] double derivative(double t, Side side = Side::Right) const;
    [[nodiscard]] double eval_in(const Location& loc, double t) const;

    /// Absolute cell endpoints inside [lo, hi], sorted, base_start included when in range.
    [[nodiscard]] std::vector<double> breakpoints(double lo, double hi) const;

    /// sup_t (f(t) - t) (sign = +1) or sup_t (t - f(t)) (sign = -1) over t >= base_start,
    /// computed from cell data; nullopt when unbounded or not affine.
    [[nodiscard]] std::optional<double> max_displacement(int sign) const;

private:
    double base_start_;
    std::optional<double> period_;
    std::vector<Cell> cells_;
};

}  // namespace osc
