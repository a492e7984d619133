#include "osc/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "osc/errors.hpp"
#include "osc/report.hpp"

namespace osc {

namespace {

// Extremum of f over [a, b], where [a, b] lies in a single cell of f.
double segment_extremum(const PiecewiseCellFunction& f, double a, double b, EnvelopeKind kind) {
    const double mid = 0.5 * (a + b);
    const auto loc = f.locate(mid);
    const double fa = f.eval_in(loc, a);
    const double fb = f.eval_in(loc, b);
    return kind == EnvelopeKind::RunningSup ? std::max(fa, fb) : std::min(fa, fb);
}

void check_same_grid(std::span<const EnvelopeFunction> envelopes, EnvelopeKind kind) {
    if (envelopes.empty()) throw InputError("combine: no envelopes given");
    const auto ref = envelopes.front().grid().nodes();
    for (const auto& e : envelopes) {
        if (e.kind() != kind) throw InputError("combine: envelope kinds differ");
        if (e.grid_ptr() == envelopes.front().grid_ptr()) continue;
        const auto nodes = e.grid().nodes();
        if (!std::equal(nodes.begin(), nodes.end(), ref.begin(), ref.end()))
            throw InputError("combine: envelopes live on different grids");
    }
}

}  // namespace

EnvelopeFunction::EnvelopeFunction(GridPtr grid, std::vector<double> values, EnvelopeKind kind,
                                   std::vector<PiecewiseCellFunction> sources, double exact_until)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      kind_(kind),
      sources_(std::move(sources)),
      exact_until_(exact_until) {
    if (values_.size() != grid_->size()) throw InputError("envelope size does not match its grid");
}

double EnvelopeFunction::at(double t) const {
    const Grid& g = *grid_;
    if (!g.contains(t)) {
        std::ostringstream os;
        os << "envelope lookup at t = " << t << " outside [" << g.front() << ", " << g.back() << "]";
        throw RangeError(os.str());
    }
    if (auto j = g.node_index(t)) return values_[*j];
    const std::size_t j = g.segment(t);
    if (kind_ == EnvelopeKind::RunningSup) {
        double v = values_[j];
        for (const auto& f : sources_) v = std::max(v, segment_extremum(f, g[j], t, kind_));
        return v;
    }
    double v = values_[j + 1];
    for (const auto& f : sources_) v = std::min(v, segment_extremum(f, t, g[j + 1], kind_));
    return v;
}

EnvelopeFunction running_sup(const PiecewiseCellFunction& tau, GridPtr grid) {
    const Grid& g = *grid;
    if (g.front() < tau.base_start() - 1e-12) throw DomainError("running_sup: grid starts before the argument");
    std::vector<double> values(g.size());
    double best = tau.eval(g[0]);
    values[0] = best;
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        best = std::max({best, segment_extremum(tau, g[j], g[j + 1], EnvelopeKind::RunningSup),
                         tau.eval(g[j + 1], Side::Right)});
        values[j + 1] = best;
    }
    return EnvelopeFunction(std::move(grid), std::move(values), EnvelopeKind::RunningSup, {tau},
                            std::numeric_limits<double>::infinity());
}

EnvelopeFunction running_inf(const PiecewiseCellFunction& sigma, GridPtr grid, double advance) {
    if (!std::isfinite(advance)) throw DomainError("running_inf: unbounded advance");
    const Grid& g = *grid;
    std::vector<double> values(g.size());
    double best = sigma.eval(g.back(), Side::Left);
    values.back() = best;
    for (std::size_t j = g.size() - 1; j > 0; --j) {
        best = std::min(best, segment_extremum(sigma, g[j - 1], g[j], EnvelopeKind::RunningInf));
        values[j - 1] = best;
    }
    return EnvelopeFunction(std::move(grid), std::move(values), EnvelopeKind::RunningInf, {sigma},
                            g.back() - std::max(advance, 0.0));
}

namespace {

EnvelopeFunction combine(std::span<const EnvelopeFunction> envelopes, EnvelopeKind kind) {
    check_same_grid(envelopes, kind);
    std::vector<double> values(envelopes.front().values().begin(), envelopes.front().values().end());
    std::vector<PiecewiseCellFunction> sources;
    double exact_until = std::numeric_limits<double>::infinity();
    for (const auto& e : envelopes) {
        const auto v = e.values();
        for (std::size_t j = 0; j < values.size(); ++j)
            values[j] = kind == EnvelopeKind::RunningSup ? std::max(values[j], v[j]) : std::min(values[j], v[j]);
        sources.insert(sources.end(), e.sources().begin(), e.sources().end());
        exact_until = std::min(exact_until, e.exact_until());
    }
    return EnvelopeFunction(envelopes.front().grid_ptr(), std::move(values), kind, std::move(sources), exact_until);
}

}  // namespace

EnvelopeFunction combine_max(std::span<const EnvelopeFunction> envelopes) {
    return combine(envelopes, EnvelopeKind::RunningSup);
}

EnvelopeFunction combine_min(std::span<const EnvelopeFunction> envelopes) {
    return combine(envelopes, EnvelopeKind::RunningInf);
}

void write_envelope_csv(std::ostream& out, const EnvelopeFunction& envelope, const char* column, double lo,
                        double hi) {
    out << "t," << column << '\n';
    const auto nodes = envelope.grid().nodes();
    const auto values = envelope.values();
    for (std::size_t j = 0; j < nodes.size(); ++j)
        if (nodes[j] >= lo && nodes[j] <= hi) out << format_real(nodes[j]) << ',' << format_real(values[j]) << '\n';
}

}  // namespace osc
