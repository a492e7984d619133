#include "osc/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "osc/errors.hpp"

namespace osc {

double base_start(const std::vector<Term>& terms) {
    if (terms.empty()) throw InputError("problem has no terms");
    double start = -std::numeric_limits<double>::infinity();
    for (const Term& term : terms)
        start = std::max({start, term.coefficient.base_start(), term.argument.base_start()});
    return start;
}

double coefficient_sum(const std::vector<Term>& terms, double t, Side side) {
    double sum = 0.0;
    for (const Term& term : terms) sum += term.coefficient.eval(t, side);
    return sum;
}

std::vector<double> breakpoints(const std::vector<Term>& terms, double lo, double hi) {
    std::vector<double> out;
    for (const Term& term : terms) {
        for (const auto* f : {&term.coefficient, &term.argument}) {
            auto b = f->breakpoints(lo, hi);
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::optional<double> max_over_terms(const std::vector<Term>& terms, int sign) {
    double best = 0.0;
    for (const Term& term : terms) {
        auto d = term.argument.max_displacement(sign);
        if (!d) return std::nullopt;
        best = std::max(best, *d);
    }
    return best;
}

std::vector<double> sample_points(const std::vector<Term>& terms, Interval window, double h) {
    if (!(h > 0.0)) throw InputError("validation step must be positive");
    if (!(window.hi > window.lo)) throw InputError("validation window must be nonempty");
    const double lo = base_start(terms);
    const double hi = std::max(window.hi, lo);
    std::vector<double> pts = breakpoints(terms, lo, hi);
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    for (std::size_t j = 0; j <= n; ++j) pts.push_back(std::min(hi, lo + static_cast<double>(j) * h));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Runs `violates(term_index, t, value_of_argument, value_of_coefficient)` on
// both one-sided values at every sample; returns the first witness.
HypothesisCheck sampled_check(const std::vector<Term>& terms, const std::vector<double>& pts, const char* name,
                              const std::function<bool(const Term&, double, Side)>& violates,
                              const char* what) {
    HypothesisCheck check{name, true, "", std::nullopt, std::nullopt, std::nullopt};
    const double start = base_start(terms);
    for (double t : pts) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (Side side : {Side::Right, Side::Left}) {
                if (side == Side::Left && t <= start) continue;
                if (violates(terms[i], t, side)) {
                    check.passed = false;
                    check.witness_t = t;
                    check.witness_term = i;
                    check.witness_cell = terms[i].argument.locate(t, side).cell;
                    std::ostringstream os;
                    os << what << " at t = " << t << " (term " << i << ")";
                    check.detail = os.str();
                    return check;
                }
            }
        }
    }
    return check;
}

HypothesisCheck nonnegative_check(const std::vector<Term>& terms, const std::vector<double>& pts) {
    auto c = sampled_check(
        terms, pts, check_names::kNonnegative,
        [](const Term& term, double t, Side side) { return term.coefficient.eval(t, side) < 0.0; },
        "p_i(t) < 0");
    if (c.witness_term) c.witness_cell = terms[*c.witness_term].coefficient.locate(*c.witness_t).cell;
    return c;
}

}  // namespace

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::optional<double> advance_bound(const AdvancedProblem& problem) { return max_over_terms(problem.terms, +1); }

std::optional<double> delay_bound(const DelayProblem& problem) { return max_over_terms(problem.terms, -1); }

ValidationReport validate_delay(const DelayProblem& problem, Interval window, double h) {
    const auto& terms = problem.terms;
    const auto pts = sample_points(terms, window, h);
    ValidationReport report;
    report.checks.push_back(nonnegative_check(terms, pts));
    report.checks.push_back(sampled_check(
        terms, pts, check_names::kDelayOrder,
        [](const Term& term, double t, Side side) { return term.argument.eval(t, side) > t; }, "tau_i(t) > t"));

    HypothesisCheck unbounded{check_names::kUnbounded, true, "", std::nullopt, std::nullopt, std::nullopt};
    for (std::size_t i = 0; i < terms.size() && unbounded.passed; ++i) {
        const auto& arg = terms[i].argument;
        const auto cells = arg.cells();
        for (std::size_t c = 0; c < cells.size(); ++c) {
            bool stalls = false;
            if (arg.period()) {
                stalls = cells[c].form != CellForm::Affine || !(cells[c].period_shift(*arg.period()) > 0.0);
            } else if (!std::isfinite(cells[c].upper)) {
                stalls = cells[c].form != CellForm::Affine || !(cells[c].c1 > 0.0);
            }
            if (stalls) {
                unbounded.passed = false;
                unbounded.witness_term = i;
                unbounded.witness_cell = c;
                unbounded.witness_t = cells[c].lower;
                std::ostringstream os;
                os << "lim tau(t) = infinity violated: term " << i << " cell " << c << " ["
                   << cells[c].lower << ", " << cells[c].upper << ")"
                   << (cells[c].is_constant() ? " is an absolute constant recurring every period"
                                              : " does not advance from one period to the next");
                unbounded.detail = os.str();
                break;
            }
        }
    }
    report.checks.push_back(unbounded);
    report.deviation_bound = delay_bound(problem);
    return report;
}

ValidationReport validate_advanced(const AdvancedProblem& problem, Interval window, double h) {
    const auto& terms = problem.terms;
    const auto pts = sample_points(terms, window, h);
    ValidationReport report;
    report.checks.push_back(nonnegative_check(terms, pts));
    report.checks.push_back(sampled_check(
        terms, pts, check_names::kAdvanceOrder,
        [](const Term& term, double t, Side side) { return term.argument.eval(t, side) < t; }, "sigma_i(t) < t"));

    report.deviation_bound = advance_bound(problem);
    HypothesisCheck bounded{check_names::kBoundedAdvance, report.deviation_bound.has_value(), "", std::nullopt,
                            std::nullopt, std::nullopt};
    if (bounded.passed) {
        std::ostringstream os;
        os << "Delta_max = " << *report.deviation_bound;
        bounded.detail = os.str();
    } else {
        bounded.detail = "sup (sigma_i(t) - t) is infinite";
    }
    report.checks.push_back(bounded);
    return report;
}

ValidationReport validate(const Equation& equation, Interval window, double h) {
    return std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, DelayProblem>)
                return validate_delay(p, window, h);
            else
                return validate_advanced(p, window, h);
        },
        equation);
}

}  // namespace osc
