#include "osc/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "osc/errors.hpp"
#include "osc/report.hpp"

namespace osc {

namespace {

namespace fs = std::filesystem;

Interval resolve_window(const ProblemFile& problem, const RunConfig& config) {
    if (config.window) return *config.window;
    if (problem.window) return *problem.window;
    throw InputError("no evaluation window: give --window T0:T1 or \"window\" in the problem file");
}

std::optional<double> resolve_period(const ProblemFile& problem, const RunConfig& config) {
    return config.period ? config.period : problem.period_hint;
}

void check_config(const RunConfig& config) {
    if (config.r_max < 1) throw InputError("--r-max must be at least 1");
    if (!(config.step > 0.0)) throw InputError("--step must be positive");
    if (!(config.margin >= 0.0)) throw InputError("--margin must be non-negative");
}

std::vector<CriterionReport> skipped_suite(bool delay, int r_max, const ValidationReport& validation) {
    std::string why = "hypotheses not satisfied:";
    for (const auto& c : validation.checks)
        if (!c.passed) why += " [" + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "]";
    const double inv_e = std::exp(-1.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    struct Entry {
        CriterionId id;
        bool iterated;
        LimitKind limit;
        double threshold;
    };
    const std::vector<Entry> specs =
        delay ? std::vector<Entry>{{CriterionId::THM_2_4, true, LimitKind::Limsup, 1.0},
                                  {CriterionId::THM_2_4_ALPHA, true, LimitKind::Limsup, nan},
                                  {CriterionId::THM_3_3, true, LimitKind::Liminf, inv_e},
                                  {CriterionId::LADDE_1_8, false, LimitKind::Liminf, inv_e},
                                  {CriterionId::HUNT_YORKE_1_10, false, LimitKind::Liminf, inv_e},
                                  {CriterionId::BK_1_12, false, LimitKind::Limsup, 1.0},
                                  {CriterionId::STAVROULAKIS_THM2, false, LimitKind::Limsup, nan}}
              : std::vector<Entry>{{CriterionId::THM_2_4A, true, LimitKind::Limsup, 1.0},
                                  {CriterionId::THM_2_4AB, true, LimitKind::Limsup, nan},
                                  {CriterionId::THM_2_5B, true, LimitKind::Liminf, inv_e},
                                  {CriterionId::LADAS_ADV_1_9, false, LimitKind::Liminf, inv_e},
                                  {CriterionId::ZHOU_1_11, false, LimitKind::Liminf, inv_e},
                                  {CriterionId::CO_1_13, false, LimitKind::Limsup, 1.0},
                                  {CriterionId::CO_1_14, false, LimitKind::Liminf, inv_e}};
    std::vector<CriterionReport> out;
    for (const auto& s : specs) {
        const int levels = s.iterated ? r_max : 1;
        for (int r = 1; r <= levels; ++r) {
            CriterionReport rep;
            rep.id = s.id;
            if (s.iterated || s.id == CriterionId::BK_1_12 || s.id == CriterionId::STAVROULAKIS_THM2) rep.r = r;
            rep.limit = s.limit;
            rep.estimate = nan;
            rep.threshold = s.threshold;
            rep.margin = nan;
            rep.verdict = Verdict::PreconditionFailed;
            rep.notes.push_back(why);
            out.push_back(std::move(rep));
        }
    }
    return out;
}

Json run_json(const ProblemFile& problem, const RunConfig& config, Interval window, std::optional<double> period,
              const ValidationReport& validation) {
    Json j;
    j["type"] = is_delay(problem.equation) ? "delay" : "advanced";
    j["m"] = terms_of(problem.equation).size();
    j["window"] = Json::array({json_real(window.lo), json_real(window.hi)});
    j["period_hint"] = period ? json_real(*period) : Json(nullptr);
    j["step"] = json_real(config.step);
    j["r_max"] = config.r_max;
    j["margin"] = json_real(config.margin);
    j["validation"] = validation_json(validation);
    return j;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

void write_json(const Json& j, const std::optional<std::string>& path, std::ostream& fallback) {
    if (path) {
        auto out = open_out(*path);
        out << j.dump(2) << '\n';
    } else {
        fallback << j.dump(2) << '\n';
    }
}

std::string describe(const CriterionReport& rep) {
    std::ostringstream os;
    std::string name(to_string(rep.id));
    if (rep.r) name += " r=" + std::to_string(*rep.r);
    os << std::left << std::setw(24) << name << " " << (rep.limit == LimitKind::Limsup ? "limsup" : "liminf")
       << " = " << std::setw(14) << format_real(rep.estimate) << " threshold " << std::setw(14)
       << format_real(rep.threshold) << " " << to_string(rep.verdict);
    return os.str();
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const RangeError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitInputError;
}

}  // namespace

Interval parse_window_flag(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("--window expects T0:T1, got \"" + text + "\"");
    try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        const std::string lo = text.substr(0, colon);
        const std::string hi = text.substr(colon + 1);
        const Interval w{std::stod(lo, &used_lo), std::stod(hi, &used_hi)};
        if (used_lo != lo.size() || used_hi != hi.size()) throw std::invalid_argument("trailing characters");
        if (!(w.hi > w.lo)) throw InputError("--window must satisfy T1 > T0");
        return w;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("--window expects T0:T1, got \"" + text + "\"");
    }
}

CheckResult run_check(const ProblemFile& problem, const RunConfig& config) {
    check_config(config);
    const Interval window = resolve_window(problem, config);
    const auto period = resolve_period(problem, config);
    const EvaluationSettings settings{window, period, config.margin};

    CheckResult result;
    result.validation = validate(problem.equation, window, config.step);
    const bool delay = is_delay(problem.equation);
    if (!result.validation.ok()) {
        result.reports = skipped_suite(delay, config.r_max, result.validation);
        result.exit_code = kExitValidationFailure;
    } else if (delay) {
        const DelayAnalysis analysis(std::get<DelayProblem>(problem.equation), window, config.step, config.r_max);
        result.reports = evaluate_all(analysis, settings);
    } else {
        const AdvancedAnalysis analysis(std::get<AdvancedProblem>(problem.equation), window, config.step,
                                        config.r_max);
        result.reports = evaluate_all(analysis, settings);
    }
    result.overall = aggregate(result.reports);
    if (result.validation.ok())
        result.exit_code = result.overall.verdict == Verdict::Oscillatory ? kExitOscillatory : kExitInconclusive;
    result.report = report_json(run_json(problem, config, window, period, result.validation), result.reports,
                                result.overall);
    return result;
}

SimulationResult run_simulate(const ProblemFile& problem, const RunConfig& config) {
    check_config(config);
    if (!is_delay(problem.equation))
        throw DomainError("advanced equations are not simulated: they do not form a forward initial-value problem");
    const auto& delay = std::get<DelayProblem>(problem.equation);
    PiecewiseCellFunction history = unit_history();
    if (config.history_path) {
        std::ifstream in(*config.history_path);
        if (!in) throw InputError("cannot open history file " + *config.history_path);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(*config.history_path + ": " + e.what());
        }
        history = parse_piecewise(j, *config.history_path);
    } else if (problem.history) {
        history = *problem.history;
    }
    double horizon = 0.0;
    if (config.horizon)
        horizon = *config.horizon;
    else if (config.window)
        horizon = config.window->hi;
    else if (problem.window)
        horizon = problem.window->hi;
    else
        throw InputError("no horizon: give --horizon T");

    Trajectory trajectory = integrate_delay(delay, history, horizon, config.step);
    SignChanges changes = count_sign_changes(trajectory);
    const double residual = discrete_residual(delay, trajectory);

    Json summary;
    summary["sign_changes"] = changes.count;
    Json locations = Json::array();
    for (const auto& [a, b] : changes.brackets) locations.push_back(Json::array({json_real(a), json_real(b)}));
    summary["locations"] = std::move(locations);
    Json touches = Json::array();
    for (double t : changes.zero_touches) touches.push_back(json_real(t));
    summary["zero_touches"] = std::move(touches);
    summary["final_value"] = json_real(trajectory.x().back());
    summary["max_residual"] = json_real(residual);
    summary["start"] = json_real(trajectory.start());
    summary["horizon"] = json_real(trajectory.end());
    summary["step"] = json_real(config.step);
    summary["note"] = "a single simulated trajectory corroborates but does not prove oscillation of all solutions";
    return SimulationResult{std::move(trajectory), std::move(changes), residual, std::move(summary)};
}

void run_plot_data(const ProblemFile& problem, const RunConfig& config) {
    check_config(config);
    if (!config.csv_dir) throw InputError("plot-data needs --csv DIR");
    const Interval window = resolve_window(problem, config);
    ensure_dir(*config.csv_dir);
    const fs::path dir(*config.csv_dir);
    const auto& terms = terms_of(problem.equation);
    const bool delay = is_delay(problem.equation);

    auto emit = [&](const Grid& grid, const std::vector<EnvelopeFunction>& per_term, const EnvelopeFunction& env,
                    const KernelFamily& kernels, auto&& functional) {
        const auto nodes = window_nodes(grid, window);
        {
            auto out = open_out(dir / "arguments.csv");
            out << 't';
            for (std::size_t i = 0; i < terms.size(); ++i) out << (delay ? ",tau_" : ",sigma_") << i + 1;
            out << '\n';
            for (double t : nodes) {
                out << format_real(t);
                for (const Term& term : terms) out << ',' << format_real(term.argument(t));
                out << '\n';
            }
        }
        {
            auto out = open_out(dir / "envelopes.csv");
            out << 't';
            for (std::size_t i = 0; i < terms.size(); ++i) out << (delay ? ",g_" : ",rho_") << i + 1;
            out << (delay ? ",g" : ",rho") << '\n';
            for (double t : nodes) {
                out << format_real(t);
                for (const auto& e : per_term) out << ',' << format_real(e.at(t));
                out << ',' << format_real(env.at(t)) << '\n';
            }
        }
        {
            auto out = open_out(dir / "weights.csv");
            write_weights_csv(out, kernels);
        }
        {
            std::vector<std::vector<double>> f;
            for (int r = 1; r <= config.r_max; ++r) f.push_back(functional(r));
            auto out = open_out(dir / "functional.csv");
            out << 't';
            for (int r = 1; r <= config.r_max; ++r) out << ",f_" << r;
            out << '\n';
            for (std::size_t n = 0; n < nodes.size(); ++n) {
                out << format_real(nodes[n]);
                for (const auto& col : f) out << ',' << format_real(col[n]);
                out << '\n';
            }
        }
    };

    if (delay) {
        const DelayAnalysis a(std::get<DelayProblem>(problem.equation), window, config.step, config.r_max);
        emit(*a.grid(), a.term_envelopes(), a.envelope(), a.kernels(),
             [&](int r) { return functional_thm_2_4(a, r, window); });
    } else {
        const AdvancedAnalysis a(std::get<AdvancedProblem>(problem.equation), window, config.step, config.r_max);
        emit(*a.grid(), a.term_envelopes(), a.envelope(), a.kernels(),
             [&](int r) { return functional_thm_2_4a(a, r, window); });
    }
}

int cli_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemFile problem = load_problem(config.problem_path);
        const CheckResult result = run_check(problem, config);
        if (config.report_path) write_json(result.report, config.report_path, out);
        if (config.csv_dir) {
            ensure_dir(*config.csv_dir);
            for (const auto& rep : result.reports) {
                if (rep.t.empty()) continue;
                auto f = open_out(fs::path(*config.csv_dir) / (criterion_stem(rep) + ".csv"));
                write_criterion_csv(f, rep);
            }
        }
        if (!result.validation.ok()) {
            out << "validation failed:\n";
            for (const auto& c : result.validation.checks) {
                if (c.passed) continue;
                out << "  " << c.name << ": " << c.detail << '\n';
                err << "validation failed: " << c.detail << '\n';
            }
        }
        for (const auto& rep : result.reports) out << describe(rep) << '\n';
        out << "overall: " << to_string(result.overall.verdict);
        if (result.overall.by) {
            out << " by " << to_string(*result.overall.by);
            if (result.overall.r) out << " r=" << *result.overall.r;
        }
        out << '\n';
        for (const auto& a : result.overall.annotations) out << "  " << a << '\n';
        return result.exit_code;
    });
}

int cli_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const ProblemFile problem = load_problem(config.problem_path);
        if (!is_delay(problem.equation)) {
            err << "error: advanced equations are not simulated: with sigma_i(t) >= t the equation is not a forward"
                   " initial-value problem\n";
            return kExitNotSimulable;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return guarded(err, [&] {
        const ProblemFile problem = load_problem(config.problem_path);
        const SimulationResult result = run_simulate(problem, config);
        if (config.csv_dir) {
            ensure_dir(*config.csv_dir);
            auto f = open_out(fs::path(*config.csv_dir) / "trajectory.csv");
            write_trajectory_csv(f, result.trajectory);
        }
        write_json(result.summary, config.report_path, out);
        if (config.report_path)
            out << "sign changes: " << result.sign_changes.count << ", final value "
                << format_real(result.trajectory.x().back()) << '\n';
        return static_cast<int>(kExitOscillatory);
    });
}

int cli_plot_data(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemFile problem = load_problem(config.problem_path);
        run_plot_data(problem, config);
        out << "wrote arguments.csv, envelopes.csv, weights.csv, functional.csv to " << *config.csv_dir << '\n';
        return static_cast<int>(kExitOscillatory);
    });
}

}  // namespace osc
