#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "osc/app.hpp"
#include "osc/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Oscillation tests for first-order equations with non-monotone delayed or advanced arguments"};
    app.require_subcommand(1);

    osc::RunConfig config;
    std::string window;
    std::optional<double> period;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("problem", config.problem_path, "problem JSON file")->required();
        sub->add_option("--r-max", config.r_max, "highest kernel iteration")->capture_default_str();
        sub->add_option("--step", config.step, "grid step h")->capture_default_str();
        sub->add_option("--window", window, "evaluation window T0:T1");
        sub->add_option("--margin", config.margin, "strictness margin")->capture_default_str();
        sub->add_option("--period", period, "period hint for limsup/liminf");
        sub->add_option("--report", config.report_path, "write the JSON report here");
        sub->add_option("--csv", config.csv_dir, "directory for CSV output");
    };
    auto* check = app.add_subcommand("check", "evaluate every criterion and print a verdict");
    add_common(check);
    auto* simulate = app.add_subcommand("simulate", "integrate a delay problem by the method of steps");
    add_common(simulate);
    simulate->add_option("--history", config.history_path, "history function JSON file (default x = 1)");
    simulate->add_option("--horizon", config.horizon, "final time");
    auto* plot = app.add_subcommand("plot-data", "write argument, envelope, weight and functional curves");
    add_common(plot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : osc::kExitInputError;
    }

    try {
        if (!window.empty()) config.window = osc::parse_window_flag(window);
    } catch (const osc::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return osc::kExitInputError;
    }
    config.period = period;

    if (check->parsed()) return osc::cli_check(config, std::cout, std::cerr);
    if (simulate->parsed()) return osc::cli_simulate(config, std::cout, std::cerr);
    return osc::cli_plot_data(config, std::cout, std::cerr);
}
