#include "osc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "osc/errors.hpp"

namespace osc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative slack used when a point computed as t - k*P lands a rounding
// error outside the base window.
double window_slack(double scale) { return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(scale)); }

}  // namespace

double Cell::value(double t, long k) const {
    const double kk = static_cast<double>(k);
    if (form == CellForm::Affine) return c0 + c1 * t + c2 * kk;
    return c0 * std::exp(c1 * t + c2 * kk);
}

double Cell::derivative(double t, long k) const {
    if (form == CellForm::Affine) return c1;
    return c1 * value(t, k);
}

double Cell::period_shift(double period) const { return c1 * period + c2; }

PiecewiseCellFunction::PiecewiseCellFunction(double base_start, std::optional<double> period,
                                             std::vector<Cell> cells)
    : base_start_(base_start), period_(period), cells_(std::move(cells)) {
    if (!std::isfinite(base_start_)) throw InputError("piecewise: base start must be finite");
    if (cells_.empty()) throw InputError("piecewise: at least one cell is required");
    if (period_ && !(*period_ > 0.0 && std::isfinite(*period_)))
        throw InputError("piecewise: period must be positive and finite");

    const double window_end = period_ ? base_start_ + *period_ : kInf;
    double expected = base_start_;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& c = cells_[i];
        if (!(c.lower < c.upper)) {
            std::ostringstream os;
            os << "piecewise: cell " << i << " has l >= u (" << c.lower << ", " << c.upper << ")";
            throw InputError(os.str());
        }
        if (std::abs(c.lower - expected) > window_slack(expected)) {
            std::ostringstream os;
            os << "piecewise: cell " << i << " starts at " << c.lower << ", expected " << expected
               << " (cells must partition the base window without gaps or overlaps)";
            throw InputError(os.str());
        }
        if (!std::isfinite(c.c0) || !std::isfinite(c.c1) || !std::isfinite(c.c2))
            throw InputError("piecewise: non-finite cell coefficient");
        expected = c.upper;
    }
    if (period_) {
        if (std::abs(expected - window_end) > window_slack(window_end))
            throw InputError("piecewise: cells must end exactly at t0 + period");
        cells_.back().upper = window_end;
    } else if (expected != kInf) {
        throw InputError("piecewise: aperiodic functions need a final unbounded cell (u = null)");
    }
}

PiecewiseCellFunction PiecewiseCellFunction::constant(double value, double base_start) {
    return PiecewiseCellFunction(base_start, std::nullopt, {Cell{base_start, kInf, value, 0.0, 0.0}});
}

PiecewiseCellFunction PiecewiseCellFunction::affine(double slope, double intercept, double base_start) {
    return PiecewiseCellFunction(base_start, std::nullopt, {Cell{base_start, kInf, intercept, slope, 0.0}});
}

bool PiecewiseCellFunction::is_affine() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.form == CellForm::Affine; });
}

PiecewiseCellFunction::Location PiecewiseCellFunction::locate(double t, Side side) const {
    if (!(t >= base_start_ - window_slack(base_start_))) {
        std::ostringstream os;
        os << "piecewise: t = " << t << " is below base start " << base_start_;
        throw DomainError(os.str());
    }
    long k = 0;
    double pos = t;
    if (period_) {
        const double p = *period_;
        k = static_cast<long>(std::floor((t - base_start_) / p));
        pos = t - static_cast<double>(k) * p;
        if (pos >= base_start_ + p) {
            ++k;
            pos -= p;
        } else if (pos < base_start_ && k > 0) {
            --k;
            pos += p;
        }
        if (side == Side::Right && pos >= base_start_ + p - window_slack(t)) {
            ++k;
            pos -= p;
        }
        // Left limits at a period boundary belong to the previous period's last cell.
        if (side == Side::Left && k > 0 && std::abs(pos - base_start_) <= window_slack(t)) {
            --k;
            pos += p;
        }
    }
    const double eps = window_slack(t);
    std::size_t idx = 0;
    if (side == Side::Right) {
        // first cell with upper > pos
        auto it = std::upper_bound(cells_.begin(), cells_.end(), pos,
                                   [eps](double v, const Cell& c) { return v < c.upper - eps; });
        idx = it == cells_.end() ? cells_.size() - 1 : static_cast<std::size_t>(it - cells_.begin());
    } else {
        // first cell with upper >= pos
        auto it = std::lower_bound(cells_.begin(), cells_.end(), pos,
                                   [eps](const Cell& c, double v) { return c.upper + eps < v; });
        idx = it == cells_.end() ? cells_.size() - 1 : static_cast<std::size_t>(it - cells_.begin());
    }
    return {idx, k};
}

double PiecewiseCellFunction::eval(double t, Side side) const { return eval_in(locate(t, side), t); }

double PiecewiseCellFunction::eval_in(const Location& loc, double t) const { return cells_[loc.cell].value(t, loc.k); }

double PiecewiseCellFunction::derivative(double t, Side side) const {
    const auto loc = locate(t, side);
    return cells_[loc.cell].derivative(t, loc.k);
}

std::vector<double> PiecewiseCellFunction::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    if (hi < lo) return out;
    auto push = [&](double x) {
        if (x >= lo && x <= hi) out.push_back(x);
    };
    if (!period_) {
        push(base_start_);
        for (const Cell& c : cells_)
            if (std::isfinite(c.upper)) push(c.upper);
        return out;
    }
    const double p = *period_;
    const long k_lo = std::max(0L, static_cast<long>(std::floor((lo - base_start_) / p)));
    const long k_hi = static_cast<long>(std::floor((hi - base_start_) / p));
    for (long k = k_lo; k <= k_hi; ++k) {
        const double shift = static_cast<double>(k) * p;
        push(cells_.front().lower + shift);
        for (const Cell& c : cells_) push(c.upper + shift);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<double> PiecewiseCellFunction::max_displacement(int sign) const {
    if (!is_affine()) return std::nullopt;
    const double s = sign >= 0 ? 1.0 : -1.0;
    double best = -kInf;
    for (const Cell& c : cells_) {
        if (period_) {
            // Bounded only when the cell moves by exactly one period per period.
            const double p = *period_;
            if (std::abs(c.period_shift(p) - p) > 1e-12 * (1.0 + p)) return std::nullopt;
        } else if (!std::isfinite(c.upper) && c.c1 != 1.0) {
            return std::nullopt;
        }
        const double hi = std::isfinite(c.upper) ? c.upper : c.lower;
        for (double t : {c.lower, hi}) best = std::max(best, s * (c.value(t, 0) - t));
    }
    return best;
}

}  // namespace osc
