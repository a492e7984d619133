#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "osc/criteria.hpp"
#include "osc/problem.hpp"

namespace osc {

using Json = nlohmann::ordered_json;

/// Fixed 12-significant-digit rendering ("%.12g"); non-finite values become
/// "nan", "inf" or "-inf".
[[nodiscard]] std::string format_real(double x);

/// Real rounded to 12 significant digits as a JSON number (null when not finite).
[[nodiscard]] Json json_real(double x);

[[nodiscard]] Json validation_json(const ValidationReport& report);
[[nodiscard]] Json criterion_json(const CriterionReport& report);
[[nodiscard]] Json overall_json(const OverallVerdict& overall);

/// {"problem": ..., "criteria": [...], "overall": {...}}
[[nodiscard]] Json report_json(const Json& problem, std::span<const CriterionReport> reports,
                               const OverallVerdict& overall);

/// "t,f" rows for one criterion's sampled functional.
void write_criterion_csv(std::ostream& out, const CriterionReport& report);

/// Conventional file stem, e.g. "THM_2_4_r1".
[[nodiscard]] std::string criterion_stem(const CriterionReport& report);

}  // namespace osc
