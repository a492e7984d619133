#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "osc/criteria.hpp"
#include "osc/problem_io.hpp"
#include "osc/simulator.hpp"

namespace osc {

enum ExitCode : int {
    kExitOscillatory = 0,
    kExitInputError = 1,
    kExitValidationFailure = 2,
    kExitNotSimulable = 3,
    kExitInconclusive = 10,
};

struct RunConfig {
    std::string problem_path;
    int r_max = 5;
    double step = 1e-3;
    std::optional<Interval> window;        // overrides the problem file
    double margin = 1e-6;
    std::optional<double> period;          // overrides the problem file
    std::optional<std::string> report_path;
    std::optional<std::string> csv_dir;
    std::optional<std::string> history_path;
    std::optional<double> horizon;
};

struct CheckResult {
    int exit_code = kExitInconclusive;
    ValidationReport validation;
    std::vector<CriterionReport> reports;
    OverallVerdict overall;
    Json report;
};

/// Validation, envelopes, kernels and every criterion for one problem.
/// Throws InputError / RangeError for unusable configurations.
[[nodiscard]] CheckResult run_check(const ProblemFile& problem, const RunConfig& config);

struct SimulationResult {
    Trajectory trajectory;
    SignChanges sign_changes;
    double max_residual = 0.0;
    Json summary;
};

/// Throws DomainError for advanced problems.
[[nodiscard]] SimulationResult run_simulate(const ProblemFile& problem, const RunConfig& config);

/// Writes arguments.csv, envelopes.csv, weights.csv and functional.csv into config.csv_dir.
void run_plot_data(const ProblemFile& problem, const RunConfig& config);

/// Command entry points: load the problem, run, write outputs and a human
/// summary to `out`, diagnostics to `err`; return the exit code.
int cli_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cli_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cli_plot_data(const RunConfig& config, std::ostream& out, std::ostream& err);

/// "T0:T1"
[[nodiscard]] Interval parse_window_flag(const std::string& text);

}  // namespace osc
