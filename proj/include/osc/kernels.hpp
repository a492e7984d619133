#pragma once

#include <iosfwd>
#include <vector>

#include "osc/problem.hpp"
#include "osc/quadrature.hpp"

namespace osc {

/// Level r of the iterated Gronwall kernel, stored as the cumulative weight
/// W_r(u) = int_{t_0}^u w_r. The kernel itself is separable:
///   delay:    a_r(t, s) = exp(W_r(t) - W_r(s)),  s <= t
///   advanced: b_r(t, s) = exp(V_r(s) - V_r(t)),  s >= t
/// with
///   w_1 = sum_i p_i,   w_{r+1}(z) = sum_i p_i(z) exp(W_r(z) - W_r(tau_i(z)))
///   v_1 = sum_i p_i,   v_{r+1}(z) = sum_i p_i(z) exp(V_r(sigma_i(z)) - V_r(z))
struct KernelTable {
    int r = 1;
    CumulativeTable weight;
};

enum class KernelDirection { Delay, Advanced };

/// Kernel levels 1..r_max on one grid.
///
/// While building level r+1, arguments that leave the grid (tau below its start,
/// sigma beyond its end) read W_r at the nearest end: coefficients are treated
/// as zero outside the tabulated span. This only shrinks the kernel, so every
/// estimate built on it stays a valid lower bound; levels become exact once the
/// query point is r maximal deviations away from the clamped end.
class KernelFamily {
public:
    KernelFamily(KernelDirection direction, std::vector<KernelTable> levels);

    [[nodiscard]] KernelDirection direction() const { return direction_; }
    [[nodiscard]] int r_max() const { return static_cast<int>(levels_.size()); }
    [[nodiscard]] const KernelTable& level(int r) const;
    [[nodiscard]] const Grid& grid() const { return levels_.front().weight.grid(); }

    /// W_r(u) (or V_r(u)); RangeError outside the grid.
    [[nodiscard]] double cumulative_weight(int r, double u) const { return level(r).weight.at(u); }

private:
    KernelDirection direction_;
    std::vector<KernelTable> levels_;
};

[[nodiscard]] KernelFamily build_kernel_delay(const DelayProblem& problem, GridPtr grid, int r_max);
[[nodiscard]] KernelFamily build_kernel_advanced(const AdvancedProblem& problem, GridPtr grid, int r_max);

/// a_r(t, s) for s <= t.
[[nodiscard]] double eval_a(const KernelFamily& kernels, int r, double t, double s);
/// b_r(t, s) for s >= t.
[[nodiscard]] double eval_b(const KernelFamily& kernels, int r, double t, double s);

/// lambda_r for x'(t) + p x(t - 1) = 0, i.e. a_r(t, t - 1):
/// lambda_0 = 1, lambda_{r+1} = exp(p * lambda_r).
struct AutonomousIterate {
    double value = 1.0;
    bool diverges = false;  // value overflowed; reported as +inf
};

[[nodiscard]] AutonomousIterate autonomous_lambda(double p, int r);

/// Weight curves w_r(t) per level as CSV: "t,w_1,...,w_rmax".
void write_weights_csv(std::ostream& out, const KernelFamily& kernels);

}  // namespace osc
