#include <doctest.h>

#include <sstream>

#include "osc/envelope.hpp"
#include "osc/errors.hpp"
#include "support.hpp"

using namespace osc;
using doctest::Approx;

namespace {

double g1_formula(double t) {
    const double k = std::floor((t - 1.0) / 2.0);
    const double u = t - 2.0 * k;
    return u <= 7.0 / 3.0 ? 2.0 * k : 3.0 * t - 4.0 * k - 7.0;
}

double rho1_formula(double t) {
    const double k = std::floor((t - 1.0) / 2.0);
    const double u = t - 2.0 * k;
    return u <= 1.5 ? 4.0 * t - 6.0 * k - 2.0 : 2.0 * k + 4.0;
}

}  // namespace

TEST_CASE("running sup of the non-monotone delay") {
    const auto tau = test::ex31_tau();
    const auto grid = build_grid(Interval{1.0, 15.0}, 1e-2, tau.breakpoints(1.0, 15.0));
    const auto g1 = running_sup(tau, grid);
    for (double t : grid->nodes()) CHECK(g1.at(t) == Approx(g1_formula(t)).epsilon(1e-12));
    for (double t = 1.05; t < 15.0; t += 0.173) CHECK(g1.at(t) == Approx(g1_formula(t)).epsilon(1e-12));

    const auto g2 = running_sup(test::ex31_tau(-0.1), grid);
    for (double t : grid->nodes()) CHECK(g2.at(t) == Approx(g1.at(t) - 0.1).epsilon(1e-12));
    const std::vector<EnvelopeFunction> both{g1, g2};
    const auto g = combine_max(both);
    for (double t : grid->nodes()) CHECK(g.at(t) == g1.at(t));
}

TEST_CASE("running sup of a monotone argument is the argument") {
    const auto tau = PiecewiseCellFunction::affine(1.0, -1.5, 0.0);
    const auto grid = build_grid(Interval{0.0, 6.0}, 0.1);
    const auto g = running_sup(tau, grid);
    for (double t : grid->nodes()) CHECK(g.at(t) == Approx(tau(t)));
}

TEST_CASE("running sup over a recurring constant") {
    const auto tau = test::ex22().terms[0].argument;
    const auto grid = build_grid(Interval{0.0, 10.0}, 0.05, tau.breakpoints(0.0, 10.0));
    const auto g = running_sup(tau, grid);
    for (int k = 1; k < 5; ++k) {
        CHECK(g.at(2.0 * k + 0.8) == Approx(2.0 * k));
        CHECK(g.at(2.0 * k + 1.5) == Approx(2.0 * k + 1.5));
    }
    CHECK(g.at(0.5) == Approx(-1.0));
}

TEST_CASE("running inf of the non-monotone advance") {
    const auto sigma = test::ex32_sigma();
    const auto grid = build_grid(Interval{1.0, 25.0}, 1e-2, sigma.breakpoints(1.0, 25.0));
    const auto rho1 = running_inf(sigma, grid, 4.0);
    CHECK(rho1.exact_until() == Approx(21.0));
    for (double t : grid->nodes()) {
        if (t > rho1.exact_until()) break;
        CHECK(rho1.at(t) == Approx(rho1_formula(t)).epsilon(1e-12));
    }
    const auto rho2 = running_inf(test::ex32_sigma(0.1), grid, 4.1);
    for (double t = 1.0; t < 20.0; t += 0.37) CHECK(rho2.at(t) == Approx(rho1.at(t) + 0.1).epsilon(1e-12));
    const std::vector<EnvelopeFunction> both{rho1, rho2};
    const auto rho = combine_min(both);
    for (double t = 1.0; t < 20.0; t += 0.37) CHECK(rho.at(t) == rho1.at(t));
}

TEST_CASE("running inf of a monotone advance") {
    const auto sigma = PiecewiseCellFunction::affine(1.0, 1.0, 0.0);
    const auto grid = build_grid(Interval{0.0, 6.0}, 0.1);
    const auto rho = running_inf(sigma, grid, 1.0);
    for (double t : grid->nodes())
        if (t <= rho.exact_until()) CHECK(rho.at(t) == Approx(t + 1.0));
}

TEST_CASE("combining needs a common grid and kind") {
    const auto tau = test::ex31_tau();
    const auto a = running_sup(tau, build_grid(Interval{1.0, 5.0}, 0.1, tau.breakpoints(1.0, 5.0)));
    const auto b = running_sup(tau, build_grid(Interval{1.0, 5.0}, 0.05, tau.breakpoints(1.0, 5.0)));
    const std::vector<EnvelopeFunction> mixed{a, b};
    CHECK_THROWS_AS((void)combine_max(mixed), InputError);
    const std::vector<EnvelopeFunction> single{a};
    CHECK(combine_max(single).values().size() == a.values().size());
}

TEST_CASE("envelope csv export") {
    const auto tau = PiecewiseCellFunction::affine(1.0, -1.0, 0.0);
    const auto g = running_sup(tau, build_grid(Interval{0.0, 1.0}, 0.5));
    std::ostringstream os;
    write_envelope_csv(os, g, "g", 0.0, 1.0);
    CHECK(os.str() == "t,g\n0,-1\n0.5,-0.5\n1,0\n");
}
