#include "osc/kernels.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "osc/errors.hpp"
#include "osc/report.hpp"

namespace osc {

namespace {

// Rounding slack when comparing argument order of kernel queries.
double order_slack(double t) { return 1e-9 * (1.0 + std::abs(t)); }

void check_level(int r, int r_max) {
    if (r < 1 || r > r_max) {
        std::ostringstream os;
        os << "kernel level r = " << r << " not built (have 1.." << r_max << ")";
        throw RangeError(os.str());
    }
}

CumulativeTable first_level(const std::vector<Term>& terms, const GridPtr& grid) {
    return cumulative(grid, [&terms](double t, Side side) { return coefficient_sum(terms, t, side); });
}

}  // namespace

KernelFamily::KernelFamily(KernelDirection direction, std::vector<KernelTable> levels)
    : direction_(direction), levels_(std::move(levels)) {
    if (levels_.empty()) throw InputError("kernel family needs at least one level");
}

const KernelTable& KernelFamily::level(int r) const {
    check_level(r, r_max());
    return levels_[static_cast<std::size_t>(r - 1)];
}

KernelFamily build_kernel_delay(const DelayProblem& problem, GridPtr grid, int r_max) {
    if (r_max < 1) throw InputError("r_max must be at least 1");
    const auto& terms = problem.terms;
    if (grid->front() < base_start(terms) - 1e-12) throw DomainError("kernel grid starts before the problem");
    std::vector<KernelTable> levels;
    levels.reserve(static_cast<std::size_t>(r_max));
    levels.push_back({1, first_level(terms, grid)});
    for (int r = 1; r < r_max; ++r) {
        const CumulativeTable& prev = levels.back().weight;
        auto weight = [&terms, &prev](double z, Side side) {
            const double wz = prev.at_clamped(z);
            double sum = 0.0;
            for (const Term& term : terms) {
                const double p = term.coefficient.eval(z, side);
                if (p == 0.0) continue;
                sum += p * std::exp(wz - prev.at_clamped(term.argument.eval(z, side)));
            }
            return sum;
        };
        levels.push_back({r + 1, cumulative(grid, weight)});
    }
    return KernelFamily(KernelDirection::Delay, std::move(levels));
}

KernelFamily build_kernel_advanced(const AdvancedProblem& problem, GridPtr grid, int r_max) {
    if (r_max < 1) throw InputError("r_max must be at least 1");
    const auto& terms = problem.terms;
    if (grid->front() < base_start(terms) - 1e-12) throw DomainError("kernel grid starts before the problem");
    std::vector<KernelTable> levels;
    levels.reserve(static_cast<std::size_t>(r_max));
    levels.push_back({1, first_level(terms, grid)});
    for (int r = 1; r < r_max; ++r) {
        const CumulativeTable& prev = levels.back().weight;
        auto weight = [&terms, &prev](double z, Side side) {
            const double vz = prev.at_clamped(z);
            double sum = 0.0;
            for (const Term& term : terms) {
                const double p = term.coefficient.eval(z, side);
                if (p == 0.0) continue;
                sum += p * std::exp(prev.at_clamped(term.argument.eval(z, side)) - vz);
            }
            return sum;
        };
        levels.push_back({r + 1, cumulative(grid, weight)});
    }
    return KernelFamily(KernelDirection::Advanced, std::move(levels));
}

double eval_a(const KernelFamily& kernels, int r, double t, double s) {
    if (kernels.direction() != KernelDirection::Delay) throw InputError("eval_a needs delay kernels");
    if (s > t + order_slack(t)) {
        std::ostringstream os;
        os << "eval_a requires s <= t (got t = " << t << ", s = " << s << ")";
        throw DomainError(os.str());
    }
    if (s > t) s = t;
    const auto& table = kernels.level(r).weight;
    return std::exp(table.at(t) - table.at(s));
}

double eval_b(const KernelFamily& kernels, int r, double t, double s) {
    if (kernels.direction() != KernelDirection::Advanced) throw InputError("eval_b needs advanced kernels");
    if (s < t - order_slack(t)) {
        std::ostringstream os;
        os << "eval_b requires s >= t (got t = " << t << ", s = " << s << ")";
        throw DomainError(os.str());
    }
    if (s < t) s = t;
    const auto& table = kernels.level(r).weight;
    return std::exp(table.at(s) - table.at(t));
}

AutonomousIterate autonomous_lambda(double p, int r) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("autonomous_lambda: p must be finite and >= 0");
    if (r < 0) throw InputError("autonomous_lambda: r must be >= 0");
    double lambda = 1.0;
    for (int i = 0; i < r; ++i) {
        lambda = std::exp(p * lambda);
        if (!std::isfinite(lambda)) return {std::numeric_limits<double>::infinity(), true};
    }
    return {lambda, false};
}

void write_weights_csv(std::ostream& out, const KernelFamily& kernels) {
    out << 't';
    for (int r = 1; r <= kernels.r_max(); ++r) out << ",w_" << r;
    out << '\n';
    const Grid& g = kernels.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
        out << format_real(g[j]);
        // Segment slope of W_r is the trapezoid-average weight; report the
        // one-sided slope to the right (left at the final node).
        const std::size_t a = j + 1 < g.size() ? j : j - 1;
        for (int r = 1; r <= kernels.r_max(); ++r) {
            const auto& w = kernels.level(r).weight;
            out << ',' << format_real((w.at_node(a + 1) - w.at_node(a)) / (g[a + 1] - g[a]));
        }
        out << '\n';
    }
}

}  // namespace osc
