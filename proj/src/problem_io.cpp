#include "osc/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "osc/errors.hpp"

namespace osc {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
    return *it;
}

double real(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "expected a finite number");
    return v;
}

double real_field(const Json& j, const char* key, const std::string& where) {
    return real(field(j, key, where), where + "." + key);
}

double real_or(const Json& j, const char* key, double fallback, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    return real(*it, where + "." + key);
}

Interval parse_window(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected [T0, T1]");
    const Interval w{real(j[0], where + "[0]"), real(j[1], where + "[1]")};
    if (!(w.hi > w.lo)) fail(where, "window must satisfy T1 > T0");
    return w;
}

}  // namespace

PiecewiseCellFunction parse_piecewise(const Json& j, const std::string& where) {
    const double t0 = real_field(j, "t0", where);
    std::optional<double> period;
    if (auto it = j.find("period"); it != j.end() && !it->is_null()) {
        period = real(*it, where + ".period");
        if (!(*period > 0.0)) fail(where + ".period", "period must be positive");
    }
    const Json& cells_json = field(j, "cells", where);
    if (!cells_json.is_array() || cells_json.empty()) fail(where + ".cells", "expected a non-empty array");
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < cells_json.size(); ++i) {
        const std::string at = where + ".cells[" + std::to_string(i) + "]";
        const Json& c = cells_json[i];
        Cell cell;
        cell.lower = real_field(c, "l", at);
        const Json& u = field(c, "u", at);
        cell.upper = u.is_null() ? std::numeric_limits<double>::infinity() : real(u, at + ".u");
        cell.c0 = real_or(c, "c0", 0.0, at);
        cell.c1 = real_or(c, "c1", 0.0, at);
        cell.c2 = real_or(c, "c2", 0.0, at);
        if (auto f = c.find("form"); f != c.end()) {
            if (!f->is_string()) fail(at + ".form", "expected \"affine\" or \"exp\"");
            const auto name = f->get<std::string>();
            if (name == "affine")
                cell.form = CellForm::Affine;
            else if (name == "exp")
                cell.form = CellForm::Exponential;
            else
                fail(at + ".form", "unknown form \"" + name + "\" (expected \"affine\" or \"exp\")");
        }
        cells.push_back(cell);
    }
    try {
        return PiecewiseCellFunction(t0, period, std::move(cells));
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

Json piecewise_json(const PiecewiseCellFunction& f) {
    Json j;
    j["t0"] = json_real(f.base_start());
    j["period"] = f.period() ? json_real(*f.period()) : Json(nullptr);
    Json cells = Json::array();
    for (const Cell& c : f.cells()) {
        Json cj;
        cj["l"] = json_real(c.lower);
        cj["u"] = std::isinf(c.upper) ? Json(nullptr) : json_real(c.upper);
        cj["c0"] = json_real(c.c0);
        cj["c1"] = json_real(c.c1);
        cj["c2"] = json_real(c.c2);
        if (c.form == CellForm::Exponential) cj["form"] = "exp";
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    return j;
}

ProblemFile parse_problem(const Json& j) {
    const Json& type = field(j, "type", "$");
    if (!type.is_string()) fail("$.type", "expected \"delay\" or \"advanced\"");
    const auto kind = type.get<std::string>();
    if (kind != "delay" && kind != "advanced") fail("$.type", "expected \"delay\" or \"advanced\", got \"" + kind + "\"");

    const Json& terms_json = field(j, "terms", "$");
    if (!terms_json.is_array() || terms_json.empty()) fail("$.terms", "expected a non-empty array");
    std::vector<Term> terms;
    for (std::size_t i = 0; i < terms_json.size(); ++i) {
        const std::string at = "$.terms[" + std::to_string(i) + "]";
        terms.push_back(Term{parse_piecewise(field(terms_json[i], "p", at), at + ".p"),
                             parse_piecewise(field(terms_json[i], "arg", at), at + ".arg")});
    }

    ProblemFile out{kind == "delay" ? Equation{DelayProblem{std::move(terms)}}
                                    : Equation{AdvancedProblem{std::move(terms)}},
                    std::nullopt, std::nullopt, std::nullopt};
    if (auto it = j.find("history"); it != j.end() && !it->is_null()) out.history = parse_piecewise(*it, "$.history");
    if (auto it = j.find("window"); it != j.end() && !it->is_null()) out.window = parse_window(*it, "$.window");
    if (auto it = j.find("period_hint"); it != j.end() && !it->is_null()) {
        out.period_hint = real(*it, "$.period_hint");
        if (!(*out.period_hint > 0.0)) fail("$.period_hint", "period hint must be positive");
    }
    return out;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    try {
        return parse_problem(j);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

bool is_delay(const Equation& e) { return std::holds_alternative<DelayProblem>(e); }

const std::vector<Term>& terms_of(const Equation& e) {
    return std::visit([](const auto& p) -> const std::vector<Term>& { return p.terms; }, e);
}

Json problem_json(const ProblemFile& problem) {
    Json j;
    j["type"] = is_delay(problem.equation) ? "delay" : "advanced";
    Json terms = Json::array();
    for (const Term& t : terms_of(problem.equation)) {
        Json tj;
        tj["p"] = piecewise_json(t.coefficient);
        tj["arg"] = piecewise_json(t.argument);
        terms.push_back(std::move(tj));
    }
    j["terms"] = std::move(terms);
    if (problem.history) j["history"] = piecewise_json(*problem.history);
    if (problem.window) j["window"] = Json::array({json_real(problem.window->lo), json_real(problem.window->hi)});
    j["period_hint"] = problem.period_hint ? json_real(*problem.period_hint) : Json(nullptr);
    return j;
}

}  // namespace osc
