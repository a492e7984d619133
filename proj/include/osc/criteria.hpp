#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "osc/envelope.hpp"
#include "osc/kernels.hpp"
#include "osc/problem.hpp"
#include "osc/quadrature.hpp"

namespace osc {

enum class CriterionId {
    LADDE_1_8,
    LADAS_ADV_1_9,
    HUNT_YORKE_1_10,
    ZHOU_1_11,
    BK_1_12,
    STAVROULAKIS_THM2,
    CO_1_13,
    CO_1_14,
    THM_2_4,
    THM_2_4_ALPHA,
    THM_3_3,
    THM_2_4A,
    THM_2_4AB,
    THM_2_5B,
};

[[nodiscard]] std::string_view to_string(CriterionId id);

enum class Verdict { Oscillatory, Inconclusive, PreconditionFailed };

[[nodiscard]] std::string_view to_string(Verdict v);

enum class LimitKind { Limsup, Liminf };

struct CriterionReport {
    CriterionId id = CriterionId::THM_2_4;
    std::optional<int> r;
    LimitKind limit = LimitKind::Limsup;
    std::vector<double> t;       // sample nodes inside the evaluation window
    std::vector<double> values;  // f(t) at those nodes
    double estimate = 0.0;       // limsup / liminf estimate of f
    double threshold = 1.0;
    double margin = 0.0;  // estimate - threshold
    Verdict verdict = Verdict::Inconclusive;
    std::optional<double> alpha;
    std::vector<std::string> notes;
    std::vector<std::string> annotations;
};

struct EvaluationSettings {
    Interval window;                    // sample nodes t in [lo, hi]
    std::optional<double> period_hint;  // limsup/liminf over the last full period
    double strictness = 1e-6;           // estimate must clear the threshold by this much
};

/// max (resp. min) of f over [window.hi - P, window.hi] with a period hint P
/// (window must span at least 2P), otherwise over the final half of the samples.
[[nodiscard]] double limsup_estimate(std::span<const double> t, std::span<const double> f, Interval window,
                                     std::optional<double> period_hint);
[[nodiscard]] double liminf_estimate(std::span<const double> t, std::span<const double> f, Interval window,
                                     std::optional<double> period_hint);

/// 1 - (1 - alpha - sqrt(1 - 2 alpha - alpha^2)) / 2, defined for alpha in [0, 1/e].
[[nodiscard]] double alpha_threshold(double alpha);

/// Everything the delay criteria share: grid, envelopes, cumulative sum of
/// coefficients and the kernel levels 1..r_max.
class DelayAnalysis {
public:
    DelayAnalysis(DelayProblem problem, Interval window, double h, int r_max);

    [[nodiscard]] const DelayProblem& problem() const { return problem_; }
    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] const ValidationReport& validation() const { return validation_; }
    [[nodiscard]] const std::vector<EnvelopeFunction>& term_envelopes() const { return term_envelopes_; }
    [[nodiscard]] const EnvelopeFunction& envelope() const { return envelope_; }
    [[nodiscard]] const CumulativeTable& coefficient_integral() const { return coefficient_integral_; }
    [[nodiscard]] const KernelFamily& kernels() const { return kernels_; }
    [[nodiscard]] int r_max() const { return kernels_.r_max(); }

private:
    DelayProblem problem_;
    GridPtr grid_;
    ValidationReport validation_;
    std::vector<EnvelopeFunction> term_envelopes_;
    EnvelopeFunction envelope_;
    CumulativeTable coefficient_integral_;
    KernelFamily kernels_;
};

class AdvancedAnalysis {
public:
    AdvancedAnalysis(AdvancedProblem problem, Interval window, double h, int r_max);

    [[nodiscard]] const AdvancedProblem& problem() const { return problem_; }
    [[nodiscard]] const GridPtr& grid() const { return grid_; }
    [[nodiscard]] const ValidationReport& validation() const { return validation_; }
    [[nodiscard]] double advance() const { return advance_; }
    [[nodiscard]] const std::vector<EnvelopeFunction>& term_envelopes() const { return term_envelopes_; }
    [[nodiscard]] const EnvelopeFunction& envelope() const { return envelope_; }
    [[nodiscard]] const CumulativeTable& coefficient_integral() const { return coefficient_integral_; }
    [[nodiscard]] const KernelFamily& kernels() const { return kernels_; }
    [[nodiscard]] int r_max() const { return kernels_.r_max(); }

private:
    AdvancedProblem problem_;
    double advance_;
    GridPtr grid_;
    ValidationReport validation_;
    std::vector<EnvelopeFunction> term_envelopes_;
    EnvelopeFunction envelope_;
    CumulativeTable coefficient_integral_;
    KernelFamily kernels_;
};

// Sampled functionals. Each returns f at the window's grid nodes.

/// int_{g(t)}^t sum_i p_i(z) a_r(g(t), tau_i(z)) dz
[[nodiscard]] std::vector<double> functional_thm_2_4(const DelayAnalysis& a, int r, Interval window);
/// int_{g(t)}^t sum_i p_i(z) a_r(g(z), tau_i(z)) dz
[[nodiscard]] std::vector<double> functional_thm_3_3(const DelayAnalysis& a, int r, Interval window);
/// int_t^{rho(t)} sum_i p_i(z) b_r(rho(t), sigma_i(z)) dz
[[nodiscard]] std::vector<double> functional_thm_2_4a(const AdvancedAnalysis& a, int r, Interval window);
/// int_t^{rho(t)} sum_i p_i(z) b_r(rho(z), sigma_i(z)) dz
[[nodiscard]] std::vector<double> functional_thm_2_5b(const AdvancedAnalysis& a, int r, Interval window);

/// Grid nodes inside the window.
[[nodiscard]] std::vector<double> window_nodes(const Grid& grid, Interval window);

/// liminf of int_{g(t)}^t sum_i p_i.
[[nodiscard]] double alpha_delay(const DelayAnalysis& a, const EvaluationSettings& settings);
/// liminf of int_t^{rho(t)} sum_i p_i.
[[nodiscard]] double alpha_advanced(const AdvancedAnalysis& a, const EvaluationSettings& settings);

[[nodiscard]] CriterionReport crit_thm_2_4(const DelayAnalysis& a, int r, const EvaluationSettings& settings);
[[nodiscard]] CriterionReport crit_thm_2_4_alpha(const DelayAnalysis& a, int r, const EvaluationSettings& settings);
[[nodiscard]] CriterionReport crit_thm_3_3(const DelayAnalysis& a, int r, const EvaluationSettings& settings);
/// LADDE_1_8 and HUNT_YORKE_1_10.
[[nodiscard]] std::vector<CriterionReport> crit_classical_delay(const DelayAnalysis& a,
                                                                const EvaluationSettings& settings);

[[nodiscard]] CriterionReport crit_thm_2_4a(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings);
[[nodiscard]] CriterionReport crit_thm_2_4ab(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings);
[[nodiscard]] CriterionReport crit_thm_2_5b(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings);
/// LADAS_ADV_1_9, ZHOU_1_11, CO_1_13, CO_1_14.
[[nodiscard]] std::vector<CriterionReport> crit_classical_advanced(const AdvancedAnalysis& a,
                                                                   const EvaluationSettings& settings);

/// Every criterion for r = 1..r_max in citation order: the iterated kernel
/// tests first, then the classical ones, then the single-argument aliases.
[[nodiscard]] std::vector<CriterionReport> evaluate_all(const DelayAnalysis& a, const EvaluationSettings& settings);
[[nodiscard]] std::vector<CriterionReport> evaluate_all(const AdvancedAnalysis& a,
                                                        const EvaluationSettings& settings);

struct OverallVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<CriterionId> by;
    std::optional<int> r;
    std::vector<std::string> annotations;
};

/// OSCILLATORY when any report is, citing the first succeeding report in list
/// order (reports of one criterion are ordered by r).
[[nodiscard]] OverallVerdict aggregate(std::span<const CriterionReport> reports);

}  // namespace osc
