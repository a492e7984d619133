#pragma once

#include <cmath>
#include <random>
#include <string>

#include "osc/piecewise.hpp"
#include "osc/problem.hpp"
#include "osc/problem_io.hpp"

namespace osc::test {

inline const double kE = std::exp(1.0);
inline const double kInvE = std::exp(-1.0);

inline std::string fixture(const std::string& name) { return std::string(OSC_FIXTURES_DIR) + "/" + name; }

inline PiecewiseCellFunction periodic2(double t0, Cell a, Cell b) { return PiecewiseCellFunction(t0, 2.0, {a, b}); }

/// tau_1 of the two-delay example: -t + 4k + 1 on [2k+1, 2k+2), 3t - 4k - 7 on [2k+2, 2k+3).
inline PiecewiseCellFunction ex31_tau(double shift = 0.0) {
    return periodic2(1.0, Cell{1.0, 2.0, 1.0 + shift, -1.0, 4.0}, Cell{2.0, 3.0, -7.0 + shift, 3.0, -4.0});
}

/// sigma_1 of the two-advance example: 4t - 6k - 2 on [2k+1, 2k+2), -2t + 6k + 10 on [2k+2, 2k+3).
inline PiecewiseCellFunction ex32_sigma(double shift = 0.0) {
    return periodic2(1.0, Cell{1.0, 2.0, -2.0 + shift, 4.0, -6.0}, Cell{2.0, 3.0, 10.0 + shift, -2.0, 6.0});
}

inline DelayProblem ex31() {
    return DelayProblem{{Term{PiecewiseCellFunction::constant(1.0 / (2.0 * kE), 1.0), ex31_tau()},
                         Term{PiecewiseCellFunction::constant(1.0 / (2.2 * kE), 1.0), ex31_tau(-0.1)}}};
}

inline AdvancedProblem ex32() {
    return AdvancedProblem{{Term{PiecewiseCellFunction::constant(7.0 / 40.0, 1.0), ex32_sigma()},
                            Term{PiecewiseCellFunction::constant(7.0 / 40.0, 1.0), ex32_sigma(0.1)}}};
}

/// x'(t) + p x(t - d) = 0 from t = 0.
inline DelayProblem autonomous(double p, double d = 1.0) {
    return DelayProblem{{Term{PiecewiseCellFunction::constant(p, 0.0), PiecewiseCellFunction::affine(1.0, -d, 0.0)}}};
}

/// Example with the recurring constant argument -1 on [2k, 2k+1) and t on [2k+1, 2k+2).
inline DelayProblem ex22() {
    return DelayProblem{{Term{PiecewiseCellFunction::constant(2.0, 0.0),
                              periodic2(0.0, Cell{0.0, 1.0, -1.0, 0.0, 0.0}, Cell{1.0, 2.0, 0.0, 1.0, 0.0})}}};
}

inline PiecewiseCellFunction exp_history(double rate, double t0 = -1.0) {
    return PiecewiseCellFunction(t0, std::nullopt,
                                 {Cell{t0, INFINITY, 1.0, -rate, 0.0, CellForm::Exponential}});
}

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace osc::test
