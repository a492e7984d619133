#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "osc/piecewise.hpp"

namespace osc {

/// Closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const { return hi - lo; }
    [[nodiscard]] bool contains(double t) const { return t >= lo && t <= hi; }
};

/// One coefficient / deviating-argument pair p_i, tau_i (or sigma_i).
struct Term {
    PiecewiseCellFunction coefficient;
    PiecewiseCellFunction argument;
};

/// x'(t) + sum_i p_i(t) x(tau_i(t)) = 0 with tau_i(t) <= t.
struct DelayProblem {
    std::vector<Term> terms;
};

/// x'(t) - sum_i p_i(t) x(sigma_i(t)) = 0 with sigma_i(t) >= t.
struct AdvancedProblem {
    std::vector<Term> terms;
};

using Equation = std::variant<DelayProblem, AdvancedProblem>;

/// Largest base start among all coefficient and argument functions: the first
/// time at which every term can be evaluated.
[[nodiscard]] double base_start(const std::vector<Term>& terms);

/// sum_i p_i(t)
[[nodiscard]] double coefficient_sum(const std::vector<Term>& terms, double t, Side side = Side::Right);

/// All coefficient and argument breakpoints in [lo, hi], sorted and unique.
[[nodiscard]] std::vector<double> breakpoints(const std::vector<Term>& terms, double lo, double hi);

/// sup_t max_i (sigma_i(t) - t); nullopt when unbounded.
[[nodiscard]] std::optional<double> advance_bound(const AdvancedProblem& problem);

/// sup_t max_i (t - tau_i(t)); nullopt when unbounded.
[[nodiscard]] std::optional<double> delay_bound(const DelayProblem& problem);

struct HypothesisCheck {
    std::string name;
    bool passed = true;
    std::string detail;
    std::optional<double> witness_t;
    std::optional<std::size_t> witness_term;
    std::optional<std::size_t> witness_cell;
};

struct ValidationReport {
    std::vector<HypothesisCheck> checks;
    /// Delay side: sup (t - tau_i(t)) when bounded. Advanced side: Delta_max.
    std::optional<double> deviation_bound;

    [[nodiscard]] bool ok() const;
    [[nodiscard]] const HypothesisCheck* find(const std::string& name) const;
};

namespace check_names {
inline constexpr const char* kNonnegative = "coefficients nonnegative";
inline constexpr const char* kDelayOrder = "tau_i(t) <= t";
inline constexpr const char* kUnbounded = "lim tau_i(t) = infinity";
inline constexpr const char* kAdvanceOrder = "sigma_i(t) >= t";
inline constexpr const char* kBoundedAdvance = "bounded advance";
}  // namespace check_names

/// Samples the hypotheses on a step-h grid over [base start, window.hi] plus
/// every cell endpoint (both one-sided values), and checks lim tau_i = infinity
/// structurally: an argument fails when some cell does not move forward from
/// one period to the next (a recurring absolute constant being the typical case).
[[nodiscard]] ValidationReport validate_delay(const DelayProblem& problem, Interval window, double h);

/// Advanced analogue; also reports Delta_max = sup max_i (sigma_i(t) - t) and
/// fails when it is infinite.
[[nodiscard]] ValidationReport validate_advanced(const AdvancedProblem& problem, Interval window, double h);

[[nodiscard]] ValidationReport validate(const Equation& equation, Interval window, double h);

}  // namespace osc
