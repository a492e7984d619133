#pragma once

#include <iosfwd>
#include <vector>

#include "osc/piecewise.hpp"
#include "osc/quadrature.hpp"

namespace osc {

enum class EnvelopeKind {
    RunningSup,  // g(t) = sup_{t0 <= s <= t} tau(s), non-decreasing, g <= t
    RunningInf,  // rho(t) = inf_{s >= t} sigma(s), non-decreasing, rho >= t
};

/// Monotone envelope of one or more deviating arguments, tabulated on a grid.
///
/// Node values are exact for the supported cell forms: every grid segment lies
/// inside one cell of each source, and a cell formula is monotone on a segment,
/// so its sup/inf over the segment is one of the two one-sided endpoint values.
/// Off-node queries combine the nearest node value with the sources' exact
/// extrema over the partial segment, so at() is exact everywhere in range.
class EnvelopeFunction {
public:
    EnvelopeFunction(GridPtr grid, std::vector<double> values, EnvelopeKind kind,
                     std::vector<PiecewiseCellFunction> sources, double exact_until);

    [[nodiscard]] const Grid& grid() const { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const { return grid_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] EnvelopeKind kind() const { return kind_; }
    [[nodiscard]] std::span<const PiecewiseCellFunction> sources() const { return sources_; }
    /// Running-inf values near the grid end ignore sigma beyond the grid; they are
    /// exact up to grid end - Delta_max.
    [[nodiscard]] double exact_until() const { return exact_until_; }

    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double operator()(double t) const { return at(t); }

private:
    GridPtr grid_;
    std::vector<double> values_;
    EnvelopeKind kind_;
    std::vector<PiecewiseCellFunction> sources_;
    double exact_until_;
};

/// g_i(t) = sup_{base_start <= s <= t} tau(s).
[[nodiscard]] EnvelopeFunction running_sup(const PiecewiseCellFunction& tau, GridPtr grid);

/// rho_i(t) = inf_{s >= t} sigma(s) by a backward sweep. Values are exact for
/// t <= grid end - advance, where advance bounds sigma(s) - s.
[[nodiscard]] EnvelopeFunction running_inf(const PiecewiseCellFunction& sigma, GridPtr grid, double advance);

/// Pointwise max of running-sup envelopes on one grid.
[[nodiscard]] EnvelopeFunction combine_max(std::span<const EnvelopeFunction> envelopes);
/// Pointwise min of running-inf envelopes on one grid.
[[nodiscard]] EnvelopeFunction combine_min(std::span<const EnvelopeFunction> envelopes);

/// CSV with header "t,<column>" and one row per grid node in [lo, hi].
void write_envelope_csv(std::ostream& out, const EnvelopeFunction& envelope, const char* column, double lo,
                        double hi);

}  // namespace osc
