#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ibc/closedform.hpp"
#include "ibc/errors.hpp"
#include "ibc/gaussian.hpp"
#include "ibc/observables.hpp"
#include "ibc/validation.hpp"

using namespace ibc;

namespace {

const SystemParams& ref() {
    static const SystemParams p = build_system(quantronium_inputs());
    return p;
}

}  // namespace

TEST_CASE("oscillator mapping in the cross scaling") {
    const SystemParams& p = ref();
    const OscillatorMapping m = oscillator_mapping(p);
    CHECK(m.omega == p.omega_cross);
    CHECK(m.chi == doctest::Approx(p.E_J * p.lambda_cross / 16.0));
    CHECK(m.epsilon == doctest::Approx(-p.E_b * p.Gamma_cross));
    CHECK(m.lambda == p.lambda_cross);
    // The shifted frequencies reproduce the branch plasma frequencies.
    CHECK(std::sqrt(m.omega * m.omega + 4 * m.omega * m.chi) == doctest::Approx(p.omega_plus));
    CHECK(std::sqrt(m.omega * m.omega - 4 * m.omega * m.chi) == doctest::Approx(p.omega_minus));
}

TEST_CASE("closed-form branch moments agree with the Gaussian propagator") {
    const SystemParams& p = ref();
    for (Branch b : {Branch::plus, Branch::minus})
        for (double frac : {0.0, 0.13, 0.5, 1.0, 1.77}) {
            const double t = frac * p.T0;
            const GaussMoments cf = moments_reversible(p, b, t);
            const GaussianState g = evolve_diagonal(p, b, Mode::reversible, t);
            CHECK(cf.mean_gamma == doctest::Approx(g.mean_gamma).epsilon(1e-9).scale(1e-6));
            CHECK(cf.mean_N == doctest::Approx(g.mean_N).epsilon(1e-9).scale(1e-3));
            CHECK(cf.var_gamma == doctest::Approx(g.var_gamma).epsilon(1e-9));
            // |psi|^2 ~ exp(-Re sigma x^2), so Re sigma = 1 / (2 var_gamma).
            CHECK(cf.sigma.real() * g.var_gamma == doctest::Approx(0.5).epsilon(1e-9));
        }
}

TEST_CASE("corrected closed form solves the coefficient equations") {
    const SystemParams& p = ref();
    const std::vector<double> grid = linspace(0.0, 2.0 * p.T0, 81);
    const auto ode = integrate(p, Mode::reversible, grid, {1e-12, 1e-14});
    const auto cf = offdiag_closedform_series(p, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, coeff_deviation(cf[i], ode[i]));
    CHECK(worst < 1e-6);
}

TEST_CASE("series and pointwise closed forms agree") {
    const SystemParams& p = ref();
    const std::vector<double> grid = linspace(0.0, 0.9 * p.T0, 7);
    const auto s = offdiag_closedform_series(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(coeff_deviation(s[i], offdiag_closedform(p, grid[i])) < 1e-9);
}

TEST_CASE("uncorrected assembly differs from the corrected one in d and the prefactor") {
    const SystemParams& p = ref();
    const double t = 0.4 * p.T0;
    const CoeffState a = offdiag_uncorrected(p, t);
    const CoeffState b = offdiag_closedform(p, t);
    CHECK(std::abs(a.c - b.c) < 1e-9 * std::abs(b.c));
    CHECK(std::abs(a.e - b.e) < 1e-9 * std::abs(b.e));
    CHECK(std::abs(a.d + b.d) < 1e-9 * std::abs(b.d));
    CHECK(a.f.real() - b.f.real() == doctest::Approx(std::log(4.0)).epsilon(1e-9));
}

TEST_CASE("closed form at t = 0 is the initial state") {
    const SystemParams& p = ref();
    CHECK(coeff_deviation(offdiag_closedform(p, 0.0), initial_coeffs(p)) < 1e-12);
}

TEST_CASE("inverted well is a regime error") {
    SystemParams p = ref();
    p.E_J = 5.0 * p.E_J0;
    CHECK_THROWS_AS(moments_reversible(p, Branch::minus, 0.1 * p.T0), RegimeError);
}

TEST_CASE("transformation-of-variables amplitudes are singular without damping") {
    CHECK_THROWS_AS(tov_P(ref(), Mode::reversible, 0.0), SingularAmplitudeError);
}

TEST_CASE("rates of the fourth-order equation come in +- pairs") {
    const SystemParams& p = ref();
    const auto [l1, l2] = tov_rates(p, Mode::irreversible);
    CHECK(std::abs(l1) > 0.0);
    CHECK(std::abs(l2) > 0.0);
    CHECK(std::abs(l1 - l2) > 0.0);
}

TEST_CASE("quartic integration reproduces the exponential solution") {
    const SystemParams& p = ref();
    const std::vector<double> grid = linspace(0.0, 0.25 * p.T0, 51);
    const auto closed = tov_P_closed(p, Mode::irreversible, grid);
    const auto [l1, l2] = tov_rates(p, Mode::irreversible);
    const TovState s0 = tov_P(p, Mode::irreversible, 0.0);
    std::array<cplx, 4> jet{};
    const cplx amp[4] = {s0.c1, s0.c2, s0.c3, s0.c4};
    const cplx rate[4] = {l1, -l1, l2, -l2};
    for (int k = 0; k < 4; ++k)
        for (int n = 0; n < 4; ++n) jet[n] += amp[k] * std::pow(rate[k], n);
    const auto quart = tov_P_quartic(p, Mode::irreversible, grid, jet, {1e-12, 1e-14});
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        scale = std::max(scale, std::abs(closed[i].P));
        worst = std::max(worst, std::abs(closed[i].P - quart[i].P));
    }
    CHECK(worst < 1e-8 * std::max(1.0, scale));
}

TEST_CASE("closed-form P evaluated pointwise and in series agree") {
    const SystemParams& p = ref();
    const double t = 0.1 * p.T0;
    const auto s = tov_P_closed(p, Mode::irreversible, {0.0, t});
    CHECK(std::abs(s[1].P - tov_P(p, Mode::irreversible, t).P) < 1e-12 * std::max(1.0, std::abs(s[1].P)));
}
