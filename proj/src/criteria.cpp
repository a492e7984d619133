#include "osc/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "osc/errors.hpp"
#include "osc/parallel.hpp"

namespace osc {

namespace {

constexpr double kInvE = 0.36787944117144233;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double node_slack(double t) { return 1e-12 * (1.0 + std::abs(t)); }

/// Integrand factor tabulated at both one-sided limits of every grid node:
///   delay:    u(z) = sum_i p_i(z) exp(K(z) - K(tau_i(z)))
///   advanced: u(z) = sum_i p_i(z) exp(K(sigma_i(z)) - K(z))
/// `valid` is false where some argument leaves the table.
struct NodeSeries {
    std::vector<double> right;
    std::vector<double> left;
    std::vector<char> valid;
};

NodeSeries kernel_series(const Grid& grid, const std::vector<Term>& terms, const CumulativeTable& table,
                         KernelDirection direction, std::optional<std::size_t> only_term = std::nullopt) {
    const std::size_t n = grid.size();
    NodeSeries s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<char>(n, 1)};
    parallel_for(n, [&](std::size_t j) {
        const double z = grid[j];
        const double kz = table.at_node(j);
        for (Side side : {Side::Right, Side::Left}) {
            if (side == Side::Left && j == 0) continue;
            if (side == Side::Right && j + 1 == n) continue;
            double sum = 0.0;
            for (std::size_t i = 0; i < terms.size(); ++i) {
                if (only_term && *only_term != i) continue;
                const double p = terms[i].coefficient.eval(z, side);
                const double arg = terms[i].argument.eval(z, side);
                if (!grid.contains(arg)) {
                    s.valid[j] = 0;
                    continue;
                }
                const double ka = table.at(arg);
                sum += p * std::exp(direction == KernelDirection::Delay ? kz - ka : ka - kz);
            }
            (side == Side::Right ? s.right : s.left)[j] = sum;
        }
        if (j == 0) s.left[j] = s.right[j];
        if (j + 1 == n) s.right[j] = s.left[j];
    });
    return s;
}

[[noreturn]] void warmup_error(const char* what, double t) {
    std::ostringstream os;
    os << what << ": a deviating argument leaves the tabulated range near t = " << t
       << " (insufficient warm-up: start the evaluation window later or extend the grid)";
    throw RangeError(os.str());
}

/// int_a^b u(z) exp(sign * (K(z) - base)) dz by the trapezoid rule on grid
/// segments; off-node ends interpolate u linearly inside their segment.
double integrate_series(const Grid& g, const NodeSeries& u, const CumulativeTable& table, double sign, double base,
                        double a, double b, const char* what) {
    if (b - a <= node_slack(b)) return 0.0;
    if (!g.contains(a) || !g.contains(b)) warmup_error(what, a < g.front() ? a : b);

    auto at_node = [&](std::size_t j, Side side) {
        if (!u.valid[j]) warmup_error(what, g[j]);
        const double v = side == Side::Right ? u.right[j] : u.left[j];
        return v * std::exp(sign * (table.at_node(j) - base));
    };
    auto at_point = [&](double x) {
        const std::size_t j = g.segment(x);
        if (!u.valid[j] || !u.valid[j + 1]) warmup_error(what, x);
        const double w = (x - g[j]) / (g[j + 1] - g[j]);
        const double v = u.right[j] + w * (u.left[j + 1] - u.right[j]);
        return v * std::exp(sign * (table.at_clamped(x) - base));
    };

    const auto ja = g.node_index(a);
    const auto jb = g.node_index(b);
    const std::size_t first = ja ? *ja + 1 : g.segment(a) + 1;
    const std::size_t last = jb ? *jb - 1 : g.segment(b);

    double total = 0.0;
    double x0 = a;
    double f0 = ja ? at_node(*ja, Side::Right) : at_point(a);
    for (std::size_t i = first; i <= last && i < g.size(); ++i) {
        if (last == static_cast<std::size_t>(-1)) break;
        const double x1 = g[i];
        total += 0.5 * (x1 - x0) * (f0 + at_node(i, Side::Left));
        x0 = x1;
        f0 = at_node(i, Side::Right);
    }
    const double fb = jb ? at_node(*jb, Side::Left) : at_point(b);
    total += 0.5 * (b - x0) * (f0 + fb);
    return total;
}

/// Cumulative trapezoid table of a node series with per-node factors, plus a
/// prefix count of invalid nodes so lookups can refuse ranges that touch them.
struct SeriesTable {
    std::vector<double> values;
    std::vector<std::size_t> invalid_prefix;  // number of invalid nodes in [0, j]

    double at(const Grid& g, double x, const char* what) const {
        const std::size_t j = g.segment(x);
        if (x <= g[j] + node_slack(x)) return values[j];
        if (x >= g[j + 1] - node_slack(x)) return values[j + 1];
        const double w = (x - g[j]) / (g[j + 1] - g[j]);
        (void)what;
        return values[j] + w * (values[j + 1] - values[j]);
    }

    double between(const Grid& g, double a, double b, const char* what) const {
        if (!g.contains(a) || !g.contains(b)) warmup_error(what, a < g.front() ? a : b);
        const std::size_t ja = g.segment(a);
        const std::size_t jb = std::min(g.segment(b) + 1, g.size() - 1);
        const std::size_t bad = invalid_prefix[jb] - (ja == 0 ? 0 : invalid_prefix[ja - 1]);
        if (bad != 0) warmup_error(what, a);
        return at(g, b, what) - at(g, a, what);
    }
};

SeriesTable cumulate(const Grid& g, const NodeSeries& u, const std::vector<double>& factor) {
    SeriesTable s;
    s.values.assign(g.size(), 0.0);
    s.invalid_prefix.assign(g.size(), 0);
    std::size_t bad = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!u.valid[j]) ++bad;
        s.invalid_prefix[j] = bad;
        if (j == 0) continue;
        const double left = u.right[j - 1] * factor[j - 1];
        const double right = u.left[j] * factor[j];
        const double inc = (u.valid[j - 1] && u.valid[j]) ? 0.5 * (g[j] - g[j - 1]) * (left + right) : 0.0;
        s.values[j] = s.values[j - 1] + inc;
    }
    return s;
}

double checked_table(const CumulativeTable& table, double x, const char* what) {
    if (!table.grid().contains(x)) warmup_error(what, x);
    return table.at(x);
}

CriterionReport make_report(CriterionId id, std::optional<int> r, LimitKind limit, std::vector<double> ts,
                            std::vector<double> values, double threshold, const EvaluationSettings& settings) {
    CriterionReport rep;
    rep.id = id;
    rep.r = r;
    rep.limit = limit;
    rep.estimate = limit == LimitKind::Limsup ? limsup_estimate(ts, values, settings.window, settings.period_hint)
                                              : liminf_estimate(ts, values, settings.window, settings.period_hint);
    rep.t = std::move(ts);
    rep.values = std::move(values);
    rep.threshold = threshold;
    rep.margin = rep.estimate - threshold;
    rep.verdict = rep.margin > settings.strictness ? Verdict::Oscillatory : Verdict::Inconclusive;
    if (!settings.period_hint) rep.notes.emplace_back("window-limited estimate (no period hint): tail half of samples");
    return rep;
}

CriterionReport precondition_failed(CriterionId id, std::optional<int> r, LimitKind limit, double threshold,
                                    std::string why) {
    CriterionReport rep;
    rep.id = id;
    rep.r = r;
    rep.limit = limit;
    rep.estimate = kNaN;
    rep.threshold = threshold;
    rep.margin = kNaN;
    rep.verdict = Verdict::PreconditionFailed;
    rep.notes.push_back(std::move(why));
    return rep;
}

const std::vector<std::string>& delay_annotations() {
    static const std::vector<std::string> notes = {
        "x'(t) + sum_i p_i(t) x(tau_i(t)) <= 0, t >= 0 has no eventually positive solutions",
        "x'(t) + sum_i p_i(t) x(tau_i(t)) >= 0, t >= 0 has no eventually negative solutions",
    };
    return notes;
}

const std::vector<std::string>& advanced_annotations() {
    static const std::vector<std::string> notes = {
        "x'(t) - sum_i p_i(t) x(sigma_i(t)) >= 0, t >= 0 has no eventually positive solutions",
        "x'(t) - sum_i p_i(t) x(sigma_i(t)) <= 0, t >= 0 has no eventually negative solutions",
    };
    return notes;
}

void annotate(CriterionReport& rep, const std::vector<std::string>& notes) {
    if (rep.verdict == Verdict::Oscillatory) rep.annotations = notes;
}

std::string failed_hypotheses(const ValidationReport& v) {
    std::string out = "hypotheses not satisfied:";
    for (const auto& c : v.checks)
        if (!c.passed) out += " [" + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "]";
    return out;
}

// alpha must lie in (0, 1/e]; rounding slightly above 1/e is accepted as 1/e.
std::optional<double> admissible_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > kInvE + 1e-12) return std::nullopt;
    return std::min(alpha, kInvE);
}

CriterionReport alpha_report(CriterionId id, int r, std::vector<double> ts, std::vector<double> values,
                             double alpha, const EvaluationSettings& settings) {
    const auto adm = admissible_alpha(alpha);
    if (!adm) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside (0, 1/e]";
        auto rep = precondition_failed(id, r, LimitKind::Limsup, kNaN, os.str());
        rep.alpha = alpha;
        return rep;
    }
    auto rep = make_report(id, r, LimitKind::Limsup, std::move(ts), std::move(values), alpha_threshold(*adm), settings);
    rep.alpha = alpha;
    return rep;
}

void check_window(const Grid& grid, Interval window) {
    if (!(window.hi > window.lo)) throw InputError("evaluation window must satisfy T1 > T0");
    if (window.lo < grid.front() - node_slack(grid.front()) || window.hi > grid.back() + node_slack(grid.back()))
        throw InputError("evaluation window leaves the analysis grid");
}

}  // namespace

std::string_view to_string(CriterionId id) {
    switch (id) {
        case CriterionId::LADDE_1_8: return "LADDE_1_8";
        case CriterionId::LADAS_ADV_1_9: return "LADAS_ADV_1_9";
        case CriterionId::HUNT_YORKE_1_10: return "HUNT_YORKE_1_10";
        case CriterionId::ZHOU_1_11: return "ZHOU_1_11";
        case CriterionId::BK_1_12: return "BK_1_12";
        case CriterionId::STAVROULAKIS_THM2: return "STAVROULAKIS_THM2";
        case CriterionId::CO_1_13: return "CO_1_13";
        case CriterionId::CO_1_14: return "CO_1_14";
        case CriterionId::THM_2_4: return "THM_2_4";
        case CriterionId::THM_2_4_ALPHA: return "THM_2_4_ALPHA";
        case CriterionId::THM_3_3: return "THM_3_3";
        case CriterionId::THM_2_4A: return "THM_2_4A";
        case CriterionId::THM_2_4AB: return "THM_2_4AB";
        case CriterionId::THM_2_5B: return "THM_2_5B";
    }
    return "UNKNOWN";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Oscillatory: return "OSCILLATORY";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
        case Verdict::PreconditionFailed: return "PRECONDITION_FAILED";
    }
    return "UNKNOWN";
}

namespace {

std::vector<double> tail(std::span<const double> t, std::span<const double> f, Interval window,
                         std::optional<double> period_hint) {
    if (t.size() != f.size()) throw InputError("sample arrays differ in length");
    std::vector<double> out;
    if (period_hint) {
        const double p = *period_hint;
        if (!(p > 0.0)) throw InputError("period hint must be positive");
        if (window.length() < 2.0 * p - node_slack(window.hi))
            throw InputError("too few samples: the window must cover at least two periods");
        const double from = window.hi - p - node_slack(window.hi);
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t[j] >= from && t[j] <= window.hi + node_slack(window.hi)) out.push_back(f[j]);
    } else {
        const std::size_t start = t.size() / 2;
        out.assign(f.begin() + static_cast<std::ptrdiff_t>(start), f.end());
    }
    if (out.size() < 2) throw InputError("too few samples for a limsup/liminf estimate");
    return out;
}

}  // namespace

double limsup_estimate(std::span<const double> t, std::span<const double> f, Interval window,
                       std::optional<double> period_hint) {
    const auto v = tail(t, f, window, period_hint);
    return *std::max_element(v.begin(), v.end());
}

double liminf_estimate(std::span<const double> t, std::span<const double> f, Interval window,
                       std::optional<double> period_hint) {
    const auto v = tail(t, f, window, period_hint);
    return *std::min_element(v.begin(), v.end());
}

double alpha_threshold(double alpha) {
    const double disc = 1.0 - 2.0 * alpha - alpha * alpha;
    if (alpha < 0.0 || disc < 0.0) throw DomainError("alpha_threshold: alpha outside [0, 1/e]");
    return 1.0 - (1.0 - alpha - std::sqrt(disc)) / 2.0;
}

std::vector<double> window_nodes(const Grid& grid, Interval window) {
    std::vector<double> out;
    for (double t : grid.nodes())
        if (t >= window.lo - node_slack(window.lo) && t <= window.hi + node_slack(window.hi)) out.push_back(t);
    return out;
}

// ---------------------------------------------------------------------------
// Analyses

namespace {

std::vector<EnvelopeFunction> sup_envelopes(const std::vector<Term>& terms, const GridPtr& grid) {
    std::vector<EnvelopeFunction> out;
    for (const Term& term : terms) out.push_back(running_sup(term.argument, grid));
    return out;
}

std::vector<EnvelopeFunction> inf_envelopes(const std::vector<Term>& terms, const GridPtr& grid, double advance) {
    std::vector<EnvelopeFunction> out;
    for (const Term& term : terms) out.push_back(running_inf(term.argument, grid, advance));
    return out;
}

CumulativeTable coefficient_table(const std::vector<Term>& terms, const GridPtr& grid) {
    return cumulative(grid, [&terms](double t, Side side) { return coefficient_sum(terms, t, side); });
}

Interval checked_window(const std::vector<Term>& terms, Interval window, std::optional<double> span) {
    if (!(window.hi > window.lo)) throw InputError("evaluation window must satisfy T1 > T0");
    const double start = base_start(terms);
    const double earliest = start + (span ? *span : 0.0);
    if (window.lo < earliest - node_slack(earliest)) {
        std::ostringstream os;
        os << "evaluation window starts at " << window.lo << "; criteria need it to start at least one maximal"
           << " delay span after the base start, i.e. at t >= " << earliest;
        throw InputError(os.str());
    }
    return window;
}

double required_advance(const AdvancedProblem& problem) {
    const auto delta = advance_bound(problem);
    if (!delta) throw InputError("advanced problem has unbounded advance sup (sigma_i(t) - t)");
    return *delta;
}

}  // namespace

DelayAnalysis::DelayAnalysis(DelayProblem problem, Interval window, double h, int r_max)
    : problem_(std::move(problem)),
      grid_(build_grid(Equation{problem_}, checked_window(problem_.terms, window, delay_bound(problem_)), h, r_max)),
      validation_(validate_delay(problem_, window, h)),
      term_envelopes_(sup_envelopes(problem_.terms, grid_)),
      envelope_(combine_max(term_envelopes_)),
      coefficient_integral_(coefficient_table(problem_.terms, grid_)),
      kernels_(build_kernel_delay(problem_, grid_, r_max)) {}

AdvancedAnalysis::AdvancedAnalysis(AdvancedProblem problem, Interval window, double h, int r_max)
    : problem_(std::move(problem)),
      advance_(required_advance(problem_)),
      grid_(build_grid(Equation{problem_}, checked_window(problem_.terms, window, std::nullopt), h, r_max)),
      validation_(validate_advanced(problem_, window, h)),
      term_envelopes_(inf_envelopes(problem_.terms, grid_, advance_)),
      envelope_(combine_min(term_envelopes_)),
      coefficient_integral_(coefficient_table(problem_.terms, grid_)),
      kernels_(build_kernel_advanced(problem_, grid_, r_max)) {}

// ---------------------------------------------------------------------------
// Functionals

std::vector<double> functional_thm_2_4(const DelayAnalysis& a, int r, Interval window) {
    const char* what = "THM_2_4";
    const Grid& g = *a.grid();
    check_window(g, window);
    const auto& table = a.kernels().level(r).weight;
    const NodeSeries u = kernel_series(g, a.problem().terms, table, KernelDirection::Delay);
    const auto ts = window_nodes(g, window);
    std::vector<double> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t n) {
        const double t = ts[n];
        const double lower = a.envelope().at(t);
        const double base = checked_table(table, lower, what);
        out[n] = integrate_series(g, u, table, -1.0, base, lower, t, what);
    });
    return out;
}

std::vector<double> functional_thm_3_3(const DelayAnalysis& a, int r, Interval window) {
    const char* what = "THM_3_3";
    const Grid& g = *a.grid();
    check_window(g, window);
    const auto& table = a.kernels().level(r).weight;
    const NodeSeries u = kernel_series(g, a.problem().terms, table, KernelDirection::Delay);
    // integrand u(z) exp(W(g(z)) - W(z)): a_r(g(z), tau_i(z)) written through the node series
    std::vector<double> factor(g.size());
    NodeSeries masked = u;
    const auto env = a.envelope().values();
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!g.contains(env[j])) {
            masked.valid[j] = 0;
            factor[j] = 0.0;
            continue;
        }
        factor[j] = std::exp(table.at(env[j]) - table.at_node(j));
    }
    const SeriesTable cum = cumulate(g, masked, factor);
    const auto ts = window_nodes(g, window);
    std::vector<double> out(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) out[n] = cum.between(g, a.envelope().at(ts[n]), ts[n], what);
    return out;
}

std::vector<double> functional_thm_2_4a(const AdvancedAnalysis& a, int r, Interval window) {
    const char* what = "THM_2_4A";
    const Grid& g = *a.grid();
    check_window(g, window);
    const auto& table = a.kernels().level(r).weight;
    const NodeSeries u = kernel_series(g, a.problem().terms, table, KernelDirection::Advanced);
    const auto ts = window_nodes(g, window);
    std::vector<double> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t n) {
        const double t = ts[n];
        const double upper = a.envelope().at(t);
        if (upper > a.envelope().exact_until()) warmup_error(what, t);
        const double base = checked_table(table, upper, what);
        out[n] = integrate_series(g, u, table, +1.0, base, t, upper, what);
    });
    return out;
}

std::vector<double> functional_thm_2_5b(const AdvancedAnalysis& a, int r, Interval window) {
    const char* what = "THM_2_5B";
    const Grid& g = *a.grid();
    check_window(g, window);
    const auto& table = a.kernels().level(r).weight;
    NodeSeries u = kernel_series(g, a.problem().terms, table, KernelDirection::Advanced);
    // integrand u(z) exp(V(z) - V(rho(z)))
    std::vector<double> factor(g.size());
    const auto env = a.envelope().values();
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!g.contains(env[j]) || g[j] > a.envelope().exact_until()) {
            u.valid[j] = 0;
            factor[j] = 0.0;
            continue;
        }
        factor[j] = std::exp(table.at_node(j) - table.at(env[j]));
    }
    const SeriesTable cum = cumulate(g, u, factor);
    const auto ts = window_nodes(g, window);
    std::vector<double> out(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) out[n] = cum.between(g, ts[n], a.envelope().at(ts[n]), what);
    return out;
}

double alpha_delay(const DelayAnalysis& a, const EvaluationSettings& settings) {
    const auto ts = window_nodes(*a.grid(), settings.window);
    std::vector<double> f(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) {
        const double lower = a.envelope().at(ts[n]);
        f[n] = checked_table(a.coefficient_integral(), ts[n], "alpha") -
               checked_table(a.coefficient_integral(), lower, "alpha");
    }
    return liminf_estimate(ts, f, settings.window, settings.period_hint);
}

double alpha_advanced(const AdvancedAnalysis& a, const EvaluationSettings& settings) {
    const auto ts = window_nodes(*a.grid(), settings.window);
    std::vector<double> f(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) {
        const double upper = a.envelope().at(ts[n]);
        f[n] = checked_table(a.coefficient_integral(), upper, "alpha") -
               checked_table(a.coefficient_integral(), ts[n], "alpha");
    }
    return liminf_estimate(ts, f, settings.window, settings.period_hint);
}

// ---------------------------------------------------------------------------
// Criteria

CriterionReport crit_thm_2_4(const DelayAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_2_4, r, LimitKind::Limsup, 1.0, failed_hypotheses(a.validation()));
    auto rep = make_report(CriterionId::THM_2_4, r, LimitKind::Limsup, window_nodes(*a.grid(), settings.window),
                           functional_thm_2_4(a, r, settings.window), 1.0, settings);
    annotate(rep, delay_annotations());
    return rep;
}

CriterionReport crit_thm_2_4_alpha(const DelayAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_2_4_ALPHA, r, LimitKind::Limsup, kNaN,
                                   failed_hypotheses(a.validation()));
    auto rep = alpha_report(CriterionId::THM_2_4_ALPHA, r, window_nodes(*a.grid(), settings.window),
                            functional_thm_2_4(a, r, settings.window), alpha_delay(a, settings), settings);
    annotate(rep, delay_annotations());
    return rep;
}

CriterionReport crit_thm_3_3(const DelayAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_3_3, r, LimitKind::Liminf, kInvE, failed_hypotheses(a.validation()));
    auto rep = make_report(CriterionId::THM_3_3, r, LimitKind::Liminf, window_nodes(*a.grid(), settings.window),
                           functional_thm_3_3(a, r, settings.window), kInvE, settings);
    annotate(rep, delay_annotations());
    return rep;
}

std::vector<CriterionReport> crit_classical_delay(const DelayAnalysis& a, const EvaluationSettings& settings) {
    std::vector<CriterionReport> out;
    if (!a.validation().ok()) {
        const auto why = failed_hypotheses(a.validation());
        out.push_back(precondition_failed(CriterionId::LADDE_1_8, std::nullopt, LimitKind::Liminf, kInvE, why));
        out.push_back(precondition_failed(CriterionId::HUNT_YORKE_1_10, std::nullopt, LimitKind::Liminf, kInvE, why));
        return out;
    }
    const auto& terms = a.problem().terms;
    const auto ts = window_nodes(*a.grid(), settings.window);
    const auto& cum = a.coefficient_integral();

    std::vector<double> ladde(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) {
        double tau_max = -std::numeric_limits<double>::infinity();
        for (const Term& term : terms) tau_max = std::max(tau_max, term.argument(ts[n]));
        ladde[n] = checked_table(cum, ts[n], "LADDE_1_8") - checked_table(cum, tau_max, "LADDE_1_8");
    }
    out.push_back(make_report(CriterionId::LADDE_1_8, std::nullopt, LimitKind::Liminf, ts, std::move(ladde), kInvE,
                              settings));

    if (!delay_bound(a.problem())) {
        out.push_back(precondition_failed(CriterionId::HUNT_YORKE_1_10, std::nullopt, LimitKind::Liminf, kInvE,
                                          "delays t - tau_i(t) are not bounded"));
    } else {
        std::vector<double> hy(ts.size());
        for (std::size_t n = 0; n < ts.size(); ++n) {
            double sum = 0.0;
            for (const Term& term : terms) sum += term.coefficient(ts[n]) * (ts[n] - term.argument(ts[n]));
            hy[n] = sum;
        }
        out.push_back(make_report(CriterionId::HUNT_YORKE_1_10, std::nullopt, LimitKind::Liminf, ts, std::move(hy),
                                  kInvE, settings));
    }
    return out;
}

CriterionReport crit_thm_2_4a(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_2_4A, r, LimitKind::Limsup, 1.0, failed_hypotheses(a.validation()));
    auto rep = make_report(CriterionId::THM_2_4A, r, LimitKind::Limsup, window_nodes(*a.grid(), settings.window),
                           functional_thm_2_4a(a, r, settings.window), 1.0, settings);
    annotate(rep, advanced_annotations());
    return rep;
}

CriterionReport crit_thm_2_4ab(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_2_4AB, r, LimitKind::Limsup, kNaN,
                                   failed_hypotheses(a.validation()));
    auto rep = alpha_report(CriterionId::THM_2_4AB, r, window_nodes(*a.grid(), settings.window),
                            functional_thm_2_4a(a, r, settings.window), alpha_advanced(a, settings), settings);
    annotate(rep, advanced_annotations());
    return rep;
}

CriterionReport crit_thm_2_5b(const AdvancedAnalysis& a, int r, const EvaluationSettings& settings) {
    if (!a.validation().ok())
        return precondition_failed(CriterionId::THM_2_5B, r, LimitKind::Liminf, kInvE,
                                   failed_hypotheses(a.validation()));
    auto rep = make_report(CriterionId::THM_2_5B, r, LimitKind::Liminf, window_nodes(*a.grid(), settings.window),
                           functional_thm_2_5b(a, r, settings.window), kInvE, settings);
    annotate(rep, advanced_annotations());
    return rep;
}

std::vector<CriterionReport> crit_classical_advanced(const AdvancedAnalysis& a, const EvaluationSettings& settings) {
    std::vector<CriterionReport> out;
    if (!a.validation().ok()) {
        const auto why = failed_hypotheses(a.validation());
        out.push_back(precondition_failed(CriterionId::LADAS_ADV_1_9, std::nullopt, LimitKind::Liminf, kInvE, why));
        out.push_back(precondition_failed(CriterionId::ZHOU_1_11, std::nullopt, LimitKind::Liminf, kInvE, why));
        out.push_back(precondition_failed(CriterionId::CO_1_13, std::nullopt, LimitKind::Limsup, 1.0, why));
        out.push_back(precondition_failed(CriterionId::CO_1_14, std::nullopt, LimitKind::Liminf, kInvE, why));
        return out;
    }
    const auto& terms = a.problem().terms;
    const Grid& g = *a.grid();
    const auto ts = window_nodes(g, settings.window);
    const auto& cum = a.coefficient_integral();

    std::vector<double> ladas(ts.size());
    std::vector<double> zhou(ts.size());
    for (std::size_t n = 0; n < ts.size(); ++n) {
        double sigma_min = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (const Term& term : terms) {
            const double s = term.argument(ts[n]);
            sigma_min = std::min(sigma_min, s);
            sum += term.coefficient(ts[n]) * (s - ts[n]);
        }
        ladas[n] = checked_table(cum, sigma_min, "LADAS_ADV_1_9") - checked_table(cum, ts[n], "LADAS_ADV_1_9");
        zhou[n] = sum;
    }
    out.push_back(make_report(CriterionId::LADAS_ADV_1_9, std::nullopt, LimitKind::Liminf, ts, std::move(ladas),
                              kInvE, settings));
    out.push_back(
        make_report(CriterionId::ZHOU_1_11, std::nullopt, LimitKind::Liminf, ts, std::move(zhou), kInvE, settings));

    // int_t^{rho(t)} sum_i p_i(s) exp(P(sigma_i(s)) - P(rho_i(t))) ds, one node series per term
    const char* what = "CO_1_13";
    std::vector<NodeSeries> per_term;
    for (std::size_t i = 0; i < terms.size(); ++i)
        per_term.push_back(kernel_series(g, terms, cum, KernelDirection::Advanced, i));
    std::vector<double> co(ts.size());
    parallel_for(ts.size(), [&](std::size_t n) {
        const double t = ts[n];
        const double upper = a.envelope().at(t);
        double total = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const double rho_i = a.term_envelopes()[i].at(t);
            // rho_i(t) <= sigma_i(s) for s >= t holds by construction of the envelope
            if (rho_i > terms[i].argument(t) + 1e-9 * (1.0 + std::abs(t))) {
                std::ostringstream os;
                os << what << ": envelope rho_" << i << "(t) exceeds sigma_" << i << "(t) at t = " << t;
                throw NumericalError(os.str());
            }
            total += integrate_series(g, per_term[i], cum, +1.0, checked_table(cum, rho_i, what), t, upper, what);
        }
        co[n] = total;
    });
    out.push_back(make_report(CriterionId::CO_1_13, std::nullopt, LimitKind::Limsup, ts, co, 1.0, settings));
    out.push_back(make_report(CriterionId::CO_1_14, std::nullopt, LimitKind::Liminf, ts, std::move(co), kInvE,
                              settings));
    return out;
}

// ---------------------------------------------------------------------------
// Suites

std::vector<CriterionReport> evaluate_all(const DelayAnalysis& a, const EvaluationSettings& settings) {
    std::vector<CriterionReport> thm24;
    std::vector<CriterionReport> thm24_alpha;
    std::vector<CriterionReport> thm33;
    const bool valid = a.validation().ok();
    const double alpha = valid ? alpha_delay(a, settings) : kNaN;
    for (int r = 1; r <= a.r_max(); ++r) {
        if (!valid) {
            thm24.push_back(crit_thm_2_4(a, r, settings));
            thm24_alpha.push_back(crit_thm_2_4_alpha(a, r, settings));
            thm33.push_back(crit_thm_3_3(a, r, settings));
            continue;
        }
        const auto ts = window_nodes(*a.grid(), settings.window);
        auto f = functional_thm_2_4(a, r, settings.window);
        auto rep = make_report(CriterionId::THM_2_4, r, LimitKind::Limsup, ts, f, 1.0, settings);
        annotate(rep, delay_annotations());
        thm24.push_back(std::move(rep));
        auto rep_alpha = alpha_report(CriterionId::THM_2_4_ALPHA, r, ts, std::move(f), alpha, settings);
        annotate(rep_alpha, delay_annotations());
        thm24_alpha.push_back(std::move(rep_alpha));
        thm33.push_back(crit_thm_3_3(a, r, settings));
    }
    std::vector<CriterionReport> out;
    for (auto* group : {&thm24, &thm24_alpha, &thm33})
        for (auto& rep : *group) out.push_back(std::move(rep));
    for (auto& rep : crit_classical_delay(a, settings)) out.push_back(std::move(rep));

    // Single-delay aliases: identical functionals to the first kernel level.
    const bool single = a.problem().terms.size() == 1;
    for (auto [alias, source] : {std::pair{CriterionId::BK_1_12, std::size_t{0}},
                                 std::pair{CriterionId::STAVROULAKIS_THM2, static_cast<std::size_t>(a.r_max())}}) {
        if (!single) {
            out.push_back(precondition_failed(alias, 1, LimitKind::Limsup, alias == CriterionId::BK_1_12 ? 1.0 : kNaN,
                                              "single-argument criterion (m = 1); problem has m = " +
                                                  std::to_string(a.problem().terms.size())));
            continue;
        }
        CriterionReport rep = out[source];
        rep.id = alias;
        rep.notes.push_back(std::string("identical to ") +
                            std::string(to_string(alias == CriterionId::BK_1_12 ? CriterionId::THM_2_4
                                                                                : CriterionId::THM_2_4_ALPHA)) +
                            " at r = 1 for a single delay");
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<CriterionReport> evaluate_all(const AdvancedAnalysis& a, const EvaluationSettings& settings) {
    std::vector<CriterionReport> thm24a;
    std::vector<CriterionReport> thm24ab;
    std::vector<CriterionReport> thm25b;
    const bool valid = a.validation().ok();
    const double alpha = valid ? alpha_advanced(a, settings) : kNaN;
    for (int r = 1; r <= a.r_max(); ++r) {
        if (!valid) {
            thm24a.push_back(crit_thm_2_4a(a, r, settings));
            thm24ab.push_back(crit_thm_2_4ab(a, r, settings));
            thm25b.push_back(crit_thm_2_5b(a, r, settings));
            continue;
        }
        const auto ts = window_nodes(*a.grid(), settings.window);
        auto f = functional_thm_2_4a(a, r, settings.window);
        auto rep = make_report(CriterionId::THM_2_4A, r, LimitKind::Limsup, ts, f, 1.0, settings);
        annotate(rep, advanced_annotations());
        thm24a.push_back(std::move(rep));
        auto rep_alpha = alpha_report(CriterionId::THM_2_4AB, r, ts, std::move(f), alpha, settings);
        annotate(rep_alpha, advanced_annotations());
        thm24ab.push_back(std::move(rep_alpha));
        thm25b.push_back(crit_thm_2_5b(a, r, settings));
    }
    std::vector<CriterionReport> out;
    for (auto* group : {&thm24a, &thm24ab, &thm25b})
        for (auto& rep : *group) out.push_back(std::move(rep));
    for (auto& rep : crit_classical_advanced(a, settings)) out.push_back(std::move(rep));
    return out;
}

OverallVerdict aggregate(std::span<const CriterionReport> reports) {
    if (reports.empty()) throw InputError("aggregate: no reports");
    OverallVerdict overall;
    for (const auto& rep : reports) {
        if (rep.verdict != Verdict::Oscillatory) continue;
        overall.verdict = Verdict::Oscillatory;
        overall.by = rep.id;
        overall.r = rep.r;
        overall.annotations = rep.annotations;
        break;
    }
    return overall;
}

}  // namespace osc
