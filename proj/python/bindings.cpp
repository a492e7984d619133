#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "osc/app.hpp"
#include "osc/errors.hpp"
#include "osc/kernels.hpp"
#include "osc/problem_io.hpp"
#include "osc/report.hpp"

namespace py = pybind11;
using namespace osc;

namespace {

ProblemFile parse(const std::string& text) {
    try {
        return parse_problem(Json::parse(text));
    } catch (const Json::exception& e) {
        throw InputError(e.what());
    }
}

RunConfig config(int r_max, double step, std::optional<std::pair<double, double>> window, double margin,
                 std::optional<double> period) {
    RunConfig c;
    c.r_max = r_max;
    c.step = step;
    if (window) c.window = Interval{window->first, window->second};
    c.margin = margin;
    c.period = period;
    return c;
}

py::tuple check(const std::string& problem, int r_max, double step, std::optional<std::pair<double, double>> window,
                double margin, std::optional<double> period) {
    CheckResult result;
    {
        py::gil_scoped_release release;
        result = run_check(parse(problem), config(r_max, step, window, margin, period));
    }
    return py::make_tuple(result.exit_code, result.report.dump());
}

py::tuple simulate(const std::string& problem, std::optional<double> horizon, double step,
                   std::optional<std::string> history) {
    ProblemFile file = parse(problem);
    if (history) file.history = parse_piecewise(Json::parse(*history), "$");
    RunConfig c;
    c.step = step;
    c.horizon = horizon;
    std::optional<SimulationResult> result;
    {
        py::gil_scoped_release release;
        result.emplace(run_simulate(file, c));
    }
    const auto t = result->trajectory.t();
    const auto x = result->trajectory.x();
    return py::make_tuple(std::vector<double>(t.begin(), t.end()), std::vector<double>(x.begin(), x.end()),
                          result->summary.dump());
}

std::vector<double> kernel_a(const std::string& problem, int r, const std::vector<std::pair<double, double>>& pairs,
                             double step, std::optional<std::pair<double, double>> span) {
    const ProblemFile file = parse(problem);
    if (!is_delay(file.equation)) throw InputError("kernel_a needs a delay problem");
    const auto& delay = std::get<DelayProblem>(file.equation);
    const double start = base_start(delay.terms);
    double hi = start;
    for (const auto& [t, s] : pairs) hi = std::max(hi, t);
    const Interval range = span ? Interval{span->first, span->second} : Interval{start, hi + step};
    const auto grid = build_grid(range, step, breakpoints(delay.terms, range.lo, range.hi));
    const auto kernels = build_kernel_delay(delay, grid, r);
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [t, s] : pairs) out.push_back(eval_a(kernels, r, t, s));
    return out;
}

py::tuple autonomous(double p, int r) {
    const auto it = autonomous_lambda(p, r);
    return py::make_tuple(it.value, it.diverges);
}

std::string validate_problem(const std::string& problem, std::pair<double, double> window, double step) {
    const ProblemFile file = parse(problem);
    return validation_json(validate(file.equation, Interval{window.first, window.second}, step)).dump();
}

void plot_data(const std::string& path, const std::string& csv_dir, int r_max, double step,
               std::optional<std::pair<double, double>> window) {
    RunConfig c = config(r_max, step, window, 1e-6, std::nullopt);
    c.csv_dir = csv_dir;
    run_plot_data(load_problem(path), c);
}

}  // namespace

PYBIND11_MODULE(_osctest, m) {
    m.doc() = "Oscillation tests for first-order equations with deviating arguments";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("check", &check, py::arg("problem"), py::arg("r_max") = 5, py::arg("step") = 1e-3,
          py::arg("window") = py::none(), py::arg("margin") = 1e-6, py::arg("period") = py::none(),
          "Run every criterion; returns (exit_code, report_json).");
    m.def("simulate", &simulate, py::arg("problem"), py::arg("horizon") = py::none(), py::arg("step") = 1e-3,
          py::arg("history") = py::none(), "Integrate a delay problem; returns (t, x, summary_json).");
    m.def("kernel_a", &kernel_a, py::arg("problem"), py::arg("r"), py::arg("pairs"), py::arg("step") = 1e-3,
          py::arg("span") = py::none(), "a_r(t, s) for each (t, s) pair.");
    m.def("autonomous_lambda", &autonomous, py::arg("p"), py::arg("r"),
          "lambda_r for x'(t) + p x(t - 1) = 0; returns (value, diverges).");
    m.def("validate", &validate_problem, py::arg("problem"), py::arg("window"), py::arg("step") = 1e-3);
    m.def("plot_data", &plot_data, py::arg("path"), py::arg("csv_dir"), py::arg("r_max") = 2, py::arg("step") = 1e-3,
          py::arg("window") = py::none());
}
