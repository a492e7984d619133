#include "osc/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace osc {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json json_real(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::strtod(format_real(x).c_str(), nullptr);
}

Json validation_json(const ValidationReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        if (c.witness_t) j["witness_t"] = json_real(*c.witness_t);
        if (c.witness_term) j["witness_term"] = *c.witness_term;
        if (c.witness_cell) j["witness_cell"] = *c.witness_cell;
        checks.push_back(std::move(j));
    }
    Json out;
    out["ok"] = report.ok();
    out["checks"] = std::move(checks);
    if (report.deviation_bound) out["deviation_bound"] = json_real(*report.deviation_bound);
    return out;
}

Json criterion_json(const CriterionReport& report) {
    Json j;
    j["id"] = std::string(to_string(report.id));
    j["r"] = report.r ? Json(*report.r) : Json(nullptr);
    j["limit"] = report.limit == LimitKind::Limsup ? "limsup" : "liminf";
    j["estimate"] = json_real(report.estimate);
    j["threshold"] = json_real(report.threshold);
    j["margin"] = json_real(report.margin);
    j["verdict"] = std::string(to_string(report.verdict));
    if (report.alpha) j["alpha"] = json_real(*report.alpha);
    if (!report.notes.empty()) j["notes"] = report.notes;
    if (!report.annotations.empty()) j["annotations"] = report.annotations;
    return j;
}

Json overall_json(const OverallVerdict& overall) {
    Json j;
    j["verdict"] = std::string(to_string(overall.verdict));
    j["by"] = overall.by ? Json(std::string(to_string(*overall.by))) : Json(nullptr);
    j["r"] = overall.r ? Json(*overall.r) : Json(nullptr);
    j["annotations"] = overall.annotations;
    return j;
}

Json report_json(const Json& problem, std::span<const CriterionReport> reports, const OverallVerdict& overall) {
    Json out;
    out["problem"] = problem;
    Json criteria = Json::array();
    for (const auto& rep : reports) criteria.push_back(criterion_json(rep));
    out["criteria"] = std::move(criteria);
    out["overall"] = overall_json(overall);
    return out;
}

void write_criterion_csv(std::ostream& out, const CriterionReport& report) {
    out << "t," << (report.r ? "f_" + std::to_string(*report.r) : std::string("f")) << '\n';
    for (std::size_t j = 0; j < report.t.size(); ++j)
        out << format_real(report.t[j]) << ',' << format_real(report.values[j]) << '\n';
}

std::string criterion_stem(const CriterionReport& report) {
    std::string stem(to_string(report.id));
    if (report.r) stem += "_r" + std::to_string(*report.r);
    return stem;
}

}  // namespace osc
