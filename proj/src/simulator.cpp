#include "osc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "osc/errors.hpp"
#include "osc/report.hpp"

namespace osc {

namespace {

constexpr double kZeroTouch = 1e-12;

double interpolate(std::span<const double> t, std::span<const double> x, double s) {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    if (it == t.begin()) return x.front();
    if (it == t.end()) return x.back();
    const auto j = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (s - t[j]) / (t[j + 1] - t[j]);
    return x[j] + w * (x[j + 1] - x[j]);
}

double history_value(const PiecewiseCellFunction& history, double s) {
    if (s < history.base_start()) {
        std::ostringstream os;
        os << "delayed lookup at s = " << s << " precedes the history start " << history.base_start();
        throw RangeError(os.str());
    }
    return history.eval(s, Side::Left);
}

}  // namespace

Trajectory::Trajectory(std::vector<double> t, std::vector<double> x, PiecewiseCellFunction history, double step)
    : t_(std::move(t)), x_(std::move(x)), history_(std::move(history)), step_(step) {
    if (t_.empty() || t_.size() != x_.size()) throw InputError("trajectory needs matching non-empty t and x");
}

double Trajectory::value(double s) const {
    if (s < t_.front()) return history_value(history_, s);
    if (s > t_.back() + 1e-12 * (1.0 + std::abs(s))) throw RangeError("trajectory lookup beyond its end");
    return interpolate(t_, x_, s);
}

PiecewiseCellFunction unit_history() { return PiecewiseCellFunction::constant(1.0, -1e9); }

Trajectory integrate_delay(const DelayProblem& problem, const PiecewiseCellFunction& history, double horizon,
                           double h) {
    if (!(h > 0.0)) throw InputError("simulation step must be positive");
    const auto& terms = problem.terms;
    if (terms.empty()) throw InputError("problem has no terms");
    const double start = base_start(terms);
    if (!(horizon > start)) throw InputError("horizon must exceed the problem start");

    const auto bps = breakpoints(terms, start, horizon);
    const GridPtr grid = build_grid(Interval{start, horizon}, h, bps);
    const Grid& g = *grid;

    std::vector<double> ts;
    std::vector<double> xs;
    ts.reserve(g.size());
    xs.reserve(g.size());
    ts.push_back(start);
    xs.push_back(history_value(history, start));

    for (std::size_t n = 0; n + 1 < g.size(); ++n) {
        const double tn = g[n];
        const double step = g[n + 1] - tn;
        const double xn = xs.back();
        double k1 = 0.0;
        bool have_k1 = false;

        auto delayed = [&](double s) {
            if (s > tn + step * (1.0 + 1e-9)) {
                std::ostringstream os;
                os << "argument exceeds t near t = " << tn << "; advanced equations cannot be simulated";
                throw DomainError(os.str());
            }
            if (s <= start) return s == start ? xs.front() : history_value(history, s);
            if (s <= tn) return interpolate(ts, xs, s);
            return xn + (s - tn) * (have_k1 ? k1 : 0.0);
        };
        auto rhs = [&](double t, Side side) {
            double sum = 0.0;
            for (const Term& term : terms) {
                const double p = term.coefficient.eval(t, side);
                if (p == 0.0) continue;
                sum += p * delayed(term.argument.eval(t, side));
            }
            return -sum;
        };

        k1 = rhs(tn, Side::Right);
        have_k1 = true;
        const double mid = tn + 0.5 * step;
        const double k2 = rhs(mid, Side::Right);
        const double k3 = rhs(mid, Side::Right);
        const double k4 = rhs(g[n + 1], Side::Left);
        const double next = xn + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(next)) {
            std::ostringstream os;
            os << "solution became non-finite near t = " << g[n + 1];
            throw NumericalError(os.str());
        }
        ts.push_back(g[n + 1]);
        xs.push_back(next);
    }
    return Trajectory(std::move(ts), std::move(xs), history, h);
}

SignChanges count_sign_changes(std::span<const double> t, std::span<const double> x) {
    if (t.size() != x.size()) throw InputError("count_sign_changes: length mismatch");
    SignChanges out;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j])) throw NumericalError("count_sign_changes: non-finite sample");
        if (std::abs(x[j]) < kZeroTouch) out.zero_touches.push_back(t[j]);
        if (j + 1 < x.size() && x[j] * x[j + 1] < 0.0) {
            ++out.count;
            out.brackets.emplace_back(t[j], t[j + 1]);
        }
    }
    return out;
}

SignChanges count_sign_changes(const Trajectory& trajectory) {
    return count_sign_changes(trajectory.t(), trajectory.x());
}

double residual_check(const DelayProblem& problem, const PiecewiseCellFunction& candidate,
                      const PiecewiseCellFunction& history, const Grid& grid) {
    const double lo = std::max(grid.front(), candidate.base_start());
    const auto bps = candidate.breakpoints(lo, grid.back());
    for (double b : bps) {
        if (!grid.node_index(b)) {
            std::ostringstream os;
            os << "candidate breakpoint t = " << b << " is not a grid node";
            throw InputError(os.str());
        }
    }
    auto is_breakpoint = [&](double t) {
        const double tol = 1e-9 * grid.step();
        auto it = std::lower_bound(bps.begin(), bps.end(), t - tol);
        return it != bps.end() && std::abs(*it - t) <= tol;
    };
    auto x = [&](double s) {
        if (s < candidate.base_start()) return history.eval(s, Side::Right);
        return candidate.eval(s, Side::Right);
    };
    double worst = 0.0;
    for (double t : grid.nodes()) {
        if (t < candidate.base_start() || is_breakpoint(t)) continue;
        double sum = candidate.derivative(t, Side::Right);
        for (const Term& term : problem.terms) sum += term.coefficient(t) * x(term.argument(t));
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

double discrete_residual(const DelayProblem& problem, const Trajectory& trajectory) {
    const auto t = trajectory.t();
    const auto x = trajectory.x();
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        const double step = t[n + 1] - t[n];
        const double mid = t[n] + 0.5 * step;
        double sum = (x[n + 1] - x[n]) / step;
        for (const Term& term : problem.terms) {
            const double s = std::min(term.argument(mid), mid);
            sum += term.coefficient(mid) * trajectory.value(s);
        }
        worst = std::max(worst, std::abs(sum));
    }
    return worst;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "t,x\n";
    for (std::size_t j = 0; j < trajectory.t().size(); ++j)
        out << format_real(trajectory.t()[j]) << ',' << format_real(trajectory.x()[j]) << '\n';
}

}  // namespace osc
