// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "osc/criteria.hpp"
#include "osc/kernels.hpp"
#include "osc/report.hpp"
#include "osc/simulator.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace osc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void line(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string num(double v) { return format_real(v); }

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string(OSC_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("osc_accept_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Json read_json(const fs::path& p) {
    std::ifstream in(p);
    return Json::parse(in);
}

const Json* find(const Json& report, const std::string& id, std::optional<int> r = std::nullopt) {
    for (const auto& c : report["criteria"]) {
        if (c["id"] != id) continue;
        if (r && (c["r"].is_null() || c["r"].get<int>() != *r)) continue;
        return &c;
    }
    return nullptr;
}

double estimate(const Json* c) {
    if (!c || c->at("estimate").is_null()) return NAN;
    return c->at("estimate").get<double>();
}

std::string verdict(const Json* c) { return c ? c->at("verdict").get<std::string>() : "missing"; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void runtime_line(const std::string& name, Clock::time_point t0, double limit) {
    const double s = seconds_since(t0);
    line(name + " runtime", s < limit, num(s) + " s (limit " + num(limit) + " s)");
}

void near(const std::string& name, double got, double want, double tol) {
    line(name, std::abs(got - want) <= tol,
         "got " + num(got) + ", want " + num(want) + " +- " + num(tol) + " (diff " + num(std::abs(got - want)) + ")");
}

// --------------------------------------------------------------------------

void autonomous_table() {
    const auto t0 = Clock::now();
    const double p05 = 0.5 * std::exp(-0.5);
    const double p1 = test::kInvE;
    const std::vector<std::tuple<double, const char*, int, double>> rows{
        {p05, "0.5e^-0.5", 1, 0.738403},  {p05, "0.5e^-0.5", 2, 0.663183}, {p05, "0.5e^-0.5", 10, 0.606725},
        {p05, "0.5e^-0.5", 18, 0.606531}, {p1, "1/e", 1, 0.692201},        {p1, "1/e", 2, 0.587744},
        {p1, "1/e", 10, 0.430949},        {p1, "1/e", 50, 0.381994},       {p1, "1/e", 100, 0.375068},
        {p1, "1/e", 1000, 0.368613},
    };
    for (const auto& [p, label, r, want] : rows) {
        const double inv = 1.0 / autonomous_lambda(p, r).value;
        const double rounded = std::round(inv * 1e6) / 1e6;
        line(std::string("autonomous table p=") + label + " r=" + std::to_string(r), std::abs(rounded - want) < 1e-9,
             "1/lambda = " + num(inv) + ", 6 dp " + num(rounded) + ", want " + num(want));
    }
    runtime_line("autonomous table", t0, 0.5);
}

void autonomous_pipeline() {
    const auto t0 = Clock::now();
    const double p = 0.5 * std::exp(-0.5);
    const auto problem = test::autonomous(p);
    const auto grid = build_grid(Interval{0.0, 30.0}, 1e-3);
    const auto kernels = build_kernel_delay(problem, grid, 10);
    for (const auto& [r, want] : std::vector<std::pair<int, double>>{{1, 0.738403}, {2, 0.663183}, {10, 0.606725}})
        near("kernel pipeline p=0.5e^-0.5 r=" + std::to_string(r) + " a_r^-1(25, 24)", 1.0 / eval_a(kernels, r, 25.0, 24.0),
             want, 1e-4);
    runtime_line("kernel pipeline", t0, 10.0);
}

void two_delay_example() {
    const auto t0 = Clock::now();
    const auto dir = scratch("ex31");
    const auto run = cli("check " + test::fixture("ex31.json") + " --r-max 1 --step 1e-3 --period 2 --report " +
                         (dir / "report.json").string());
    line("two-delay CLI exit code", run.code == 0, "exit " + std::to_string(run.code) + " (0 = OSCILLATORY)");
    if (!fs::exists(dir / "report.json")) {
        line("two-delay report", false, "no report written:\n" + run.out);
        return;
    }
    const Json report = read_json(dir / "report.json");
    const auto window = report["problem"]["window"];
    line("two-delay window spans >= 10 periods", window[1].get<double>() - window[0].get<double>() >= 20.0,
         "window [" + num(window[0].get<double>()) + ", " + num(window[1].get<double>()) + "]");
    const Json* thm = find(report, "THM_2_4", 1);
    near("two-delay THM_2_4 r=1 limsup estimate", estimate(thm), 1.22696, 1e-3);
    line("two-delay THM_2_4 r=1 verdict", verdict(thm) == "OSCILLATORY", verdict(thm));
    const Json* ladde = find(report, "LADDE_1_8");
    near("two-delay LADDE_1_8 value vs 0.35125", estimate(ladde), 0.35125, 1e-6);
    near("two-delay LADDE_1_8 value vs 2.1/(2.2e)", estimate(ladde), 2.1 / (2.2 * test::kE), 1e-6);
    const Json* hy = find(report, "HUNT_YORKE_1_10");
    near("two-delay HUNT_YORKE_1_10 value vs 1/e", estimate(hy), test::kInvE, 1e-9);
    line("two-delay HUNT_YORKE_1_10 verdict", verdict(hy) == "INCONCLUSIVE", verdict(hy));
    line("two-delay overall verdict", report["overall"]["verdict"] == "OSCILLATORY",
         report["overall"]["verdict"].get<std::string>());
    runtime_line("two-delay example", t0, 30.0);
}

void two_advance_example() {
    const auto t0 = Clock::now();
    const auto dir = scratch("ex32");
    const auto run = cli("check " + test::fixture("ex32.json") + " --r-max 2 --step 1e-3 --period 2 --report " +
                         (dir / "report.json").string());
    line("two-advance CLI exit code", run.code == 0, "exit " + std::to_string(run.code) + " (0 = OSCILLATORY)");
    if (!fs::exists(dir / "report.json")) {
        line("two-advance report", false, "no report written:\n" + run.out);
        return;
    }
    const Json report = read_json(dir / "report.json");
    const Json* f1 = find(report, "THM_2_4A", 1);
    const Json* f2 = find(report, "THM_2_4A", 2);
    near("two-advance THM_2_4A r=1 limsup estimate", estimate(f1), 0.777403, 1e-3);
    line("two-advance THM_2_4A r=1 verdict INCONCLUSIVE", verdict(f1) == "INCONCLUSIVE", verdict(f1));
    near("two-advance THM_2_4A r=2 limsup estimate", estimate(f2), 1.558893, 1e-3);
    line("two-advance THM_2_4A r=2 verdict OSCILLATORY", verdict(f2) == "OSCILLATORY", verdict(f2));
    const Json* ladas = find(report, "LADAS_ADV_1_9");
    const Json* zhou = find(report, "ZHOU_1_11");
    near("two-advance LADAS_ADV_1_9 value", estimate(ladas), 0.35, 1e-9);
    line("two-advance LADAS_ADV_1_9 verdict", verdict(ladas) == "INCONCLUSIVE", verdict(ladas));
    near("two-advance ZHOU_1_11 value", estimate(zhou), 0.3675, 1e-9);
    line("two-advance ZHOU_1_11 verdict", verdict(zhou) == "INCONCLUSIVE", verdict(zhou));
    runtime_line("two-advance example", t0, 60.0);

    // f_1 sampled at t = 2k + 1 rather than its limsup
    const Interval w{9.0, 29.0};
    const AdvancedAnalysis a(test::ex32(), w, 1e-3, 1);
    const auto nodes = window_nodes(*a.grid(), w);
    const auto f = functional_thm_2_4a(a, 1, w);
    double worst = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double k = (nodes[j] - 1.0) / 2.0;
        if (std::abs(k - std::round(k)) < 1e-9) worst = std::max(worst, std::abs(f[j] - 0.777403));
    }
    line("two-advance THM_2_4A r=1 pointwise f_1(2k+1)", worst <= 1e-3, "max |f_1(2k+1) - 0.777403| = " + num(worst));
}

void recurring_constant_example() {
    const auto t0 = Clock::now();
    const auto run = cli("check " + test::fixture("ex22.json"));
    line("recurring-argument validation flag",
         run.code == 2 && run.out.find("lim tau(t) = infinity violated") != std::string::npos,
         "exit " + std::to_string(run.code));

    const Interval w{2.0, 22.0};
    const DelayAnalysis a(test::ex22(), w, 1e-3, 1);
    double worst = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const double t = 2.0 * k + 0.8;
        const double v = integral_between(a.coefficient_integral(), a.envelope().at(t), t);
        worst = std::max(worst, std::abs(v - 1.6));
    }
    line("recurring-argument integral over [g(t), t] at t = 2k+0.8", worst <= 1e-9, "max |int - 1.6| = " + num(worst));

    const PiecewiseCellFunction candidate(0.0, 2.0,
                                          {Cell{0.0, 1.0, 1.0, 0.0, -2.0, CellForm::Exponential},
                                           Cell{1.0, 2.0, std::exp(2.0), -2.0, 2.0, CellForm::Exponential}});
    const PiecewiseCellFunction history(-1.0, std::nullopt, {Cell{-1.0, INFINITY, 1.0, 1.0, 0.0}});
    const auto grid = build_grid(Interval{0.0, 20.0}, 1e-3, candidate.breakpoints(0.0, 20.0));
    const double res = residual_check(test::ex22(), candidate, history, *grid);
    line("recurring-argument candidate residual", res <= 1e-10, "max residual " + num(res));
    runtime_line("recurring-argument example", t0, 30.0);
}

void property_suites() {
    const std::vector<std::string> names{
        "kernel cocycle identity",
        "kernels are monotone in r and at least one",
        "separable kernels agree with nested quadrature",
        "separable kernels agree with nested quadrature at 100 pairs",
        "advanced kernels agree with nested quadrature",
        "running sup is monotone and matches brute force",
        "running sup is idempotent on non-decreasing input",
        "running inf is monotone and matches brute force",
        "quadrature additivity and exactness on piecewise-affine integrands",
        "grid refinement changes fixture estimates by less than 5e-3",
    };
    for (const auto& name : names) {
        const std::string cmd = std::string(OSC_PROPERTY_TESTS_PATH) + " --test-case=\"" + name + "\" 2>&1";
        std::string out;
        FILE* pipe = popen(cmd.c_str(), "r");
        char buf[4096];
        while (pipe && std::fgets(buf, sizeof buf, pipe)) out += buf;
        const int status = pipe ? pclose(pipe) : -1;
        const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0 && out.find("1 passed") != std::string::npos;
        std::string summary;
        if (const auto pos = out.find("assertions:"); pos != std::string::npos)
            summary = out.substr(pos, out.find('\n', pos) - pos);
        line("property: " + name, ok, summary);
    }
}

void never_false_positive() {
    const auto t0 = Clock::now();
    const auto dir = scratch("nfp");
    Json tenth;
    {
        std::ifstream in(test::fixture("ex21_alpha1.json"));
        tenth = Json::parse(in);
    }
    tenth["terms"][0]["p"]["cells"][0]["c0"] = 0.1 * test::kInvE;
    {
        std::ofstream out(dir / "tenth.json");
        out << tenth.dump(2);
    }
    const std::vector<std::pair<std::string, std::string>> problems{
        {"0.1/e", (dir / "tenth.json").string()},
        {"0.5e^-0.5", test::fixture("ex21_alpha05.json")},
        {"1/e", test::fixture("ex21_alpha1.json")},
    };
    int index = 0;
    for (const auto& [label, path] : problems) {
        const auto report_path = dir / ("report_" + std::to_string(index++) + ".json");
        const auto run = cli("check " + path + " --r-max 100 --window 10:14 --period 1 --report " + report_path.string());
        int flagged = 0;
        int total = 0;
        if (fs::exists(report_path)) {
            const Json report = read_json(report_path);
            for (const auto& c : report["criteria"]) {
                ++total;
                if (c["verdict"] == "OSCILLATORY") ++flagged;
            }
        }
        line("never-false-positive p=" + label + " up to r=100", run.code == 10 && total > 100 && flagged == 0,
             "exit " + std::to_string(run.code) + ", " + std::to_string(total) + " reports, " +
                 std::to_string(flagged) + " OSCILLATORY");
    }
    runtime_line("never-false-positive", t0, 120.0);
}

// Largest x(t) a_r(t, s) / x(s) - 1 over s <= t inside positive stretches,
// with s at least (r + 1) delay spans into the stretch.
std::pair<double, int> decay_excess(const DelayProblem& problem, double horizon, double h, int r_max) {
    const auto traj = integrate_delay(problem, unit_history(), horizon, h);
    const double start = base_start(problem.terms);
    const auto grid = build_grid(Interval{start, horizon}, h, breakpoints(problem.terms, start, horizon));
    const auto kernels = build_kernel_delay(problem, grid, r_max);
    const double span = *delay_bound(problem);
    std::vector<std::pair<double, double>> stretches;
    double a = traj.start();
    for (std::size_t j = 0; j < traj.t().size(); ++j) {
        if (traj.x()[j] > 0.0) continue;
        if (j > 0 && traj.t()[j - 1] > a) stretches.emplace_back(a, traj.t()[j - 1]);
        a = INFINITY;
        if (j + 1 < traj.t().size() && traj.x()[j + 1] > 0.0) a = traj.t()[j + 1];
    }
    if (std::isfinite(a) && traj.end() > a) stretches.emplace_back(a, traj.end());
    double worst = -INFINITY;
    int pairs = 0;
    for (const auto& [lo, hi] : stretches)
        for (int r = 1; r <= r_max; ++r) {
            const double from = lo + (r + 1) * span;
            for (double t = from; t <= hi; t += 0.173)
                for (double s = from; s <= t; s += 0.131) {
                    worst = std::max(worst, traj.value(t) * eval_a(kernels, r, t, s) / traj.value(s) - 1.0);
                    ++pairs;
                }
        }
    return {worst, pairs};
}

void simulation() {
    const auto t0 = Clock::now();
    const auto dir = scratch("sim");
    const auto run = cli("simulate " + test::fixture("ex21_alpha1.json") + " --step 1e-3 --horizon 10 --csv " +
                         dir.string() + " --report " + (dir / "summary.json").string());
    double worst = INFINITY;
    if (run.code == 0 && fs::exists(dir / "trajectory.csv")) {
        std::ifstream in(dir / "trajectory.csv");
        std::string row;
        std::getline(in, row);
        worst = 0.0;
        double last = -1.0;
        while (std::getline(in, row)) {
            double t = 0.0, x = 0.0;
            if (std::sscanf(row.c_str(), "%lf,%lf", &t, &x) != 2) continue;
            worst = std::max(worst, std::abs(x - std::exp(-t)));
            last = t;
        }
        if (last < 10.0 - 1e-9) worst = INFINITY;
    }
    line("critical autonomous trajectory tracks e^-t on [0, 10]", worst <= 1e-5, "max |x - e^-t| = " + num(worst));

    const auto sim = cli("simulate " + test::fixture("ex31.json") + " --step 1e-3 --horizon 100 --report " +
                         (dir / "ex31.json").string());
    long changes = -1;
    if (fs::exists(dir / "ex31.json")) changes = read_json(dir / "ex31.json")["sign_changes"].get<long>();
    line("two-delay trajectory with unit history changes sign by T = 100", sim.code == 0 && changes >= 1,
         std::to_string(changes) + " sign changes");

    const double h = 1e-3;
    DelayProblem half = test::ex31();
    for (auto& term : half.terms) {
        std::vector<Cell> cells(term.coefficient.cells().begin(), term.coefficient.cells().end());
        for (auto& c : cells) c.c0 *= 0.5;
        term.coefficient = PiecewiseCellFunction(term.coefficient.base_start(), term.coefficient.period(), cells);
    }
    const std::vector<std::tuple<std::string, DelayProblem, double, int>> cases{
        {"two-delay", test::ex31(), 100.0, 2},
        {"two-delay, halved coefficients", half, 40.0, 3},
        {"autonomous p=0.3", test::autonomous(0.3), 30.0, 4},
    };
    for (const auto& [label, problem, horizon, r_max] : cases) {
        const auto [excess, pairs] = decay_excess(problem, horizon, h, r_max);
        line("decay bound x(t) a_r(t,s) <= x(s)(1+10h), " + label, pairs == 0 || excess <= 10.0 * h,
             std::to_string(pairs) + " pairs, max excess " + num(pairs ? excess : 0.0));
    }
    runtime_line("simulation", t0, 60.0);
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void()>>> groups{
        {"autonomous closed form", autonomous_table},
        {"autonomous pipeline", autonomous_pipeline},
        {"two-delay example", two_delay_example},
        {"two-advance example", two_advance_example},
        {"recurring-argument example", recurring_constant_example},
        {"property suites", property_suites},
        {"never-false-positive", never_false_positive},
        {"simulation", simulation},
    };
    for (const auto& [name, body] : groups) {
        std::printf("== %s\n", name);
        try {
            body();
        } catch (const std::exception& e) {
            line(name, false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d criterion line(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
