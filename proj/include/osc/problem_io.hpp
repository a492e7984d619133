#pragma once

#include <optional>
#include <string>

#include "osc/problem.hpp"
#include "osc/report.hpp"

namespace osc {

/// Contents of a problem file.
struct ProblemFile {
    Equation equation;
    std::optional<PiecewiseCellFunction> history;
    std::optional<Interval> window;
    std::optional<double> period_hint;
};

/// Piecewise object {"t0", "period": P|null, "cells": [{"l", "u"|null, "c0", "c1", "c2", "form"?}]}.
/// Errors are InputError naming the offending field path.
[[nodiscard]] PiecewiseCellFunction parse_piecewise(const Json& j, const std::string& where = "$");
[[nodiscard]] Json piecewise_json(const PiecewiseCellFunction& f);

[[nodiscard]] ProblemFile parse_problem(const Json& j);
/// Reads and parses a file; parse errors carry line and column.
[[nodiscard]] ProblemFile load_problem(const std::string& path);

[[nodiscard]] Json problem_json(const ProblemFile& problem);

[[nodiscard]] bool is_delay(const Equation& e);
[[nodiscard]] const std::vector<Term>& terms_of(const Equation& e);

}  // namespace osc
