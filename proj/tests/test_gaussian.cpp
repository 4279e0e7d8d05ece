#include <doctest.h>

#include <cmath>
#include <random>

#include "ibc/errors.hpp"
#include "ibc/gaussian.hpp"
#include "ibc/params.hpp"

using namespace ibc;

namespace {

const SystemParams& ref() {
    static const SystemParams p = build_system(quantronium_inputs());
    return p;
}

// Moment equations of the linear Fokker-Planck equation, integrated with a
// small fixed-step RK4:  m' = M (m - c),  C' = M C + C M^T + N.
AlphaMoments moments_rk4(const FokkerPlanckSpec& s, cplx mean0, const Eigen::Matrix2cd& cov0, double t, int steps) {
    const Eigen::Vector2cd centre(s.displacement, std::conj(s.displacement));
    Eigen::Vector2cd m(mean0, std::conj(mean0));
    Eigen::Matrix2cd C = cov0;
    const double h = t / steps;
    auto fm = [&](const Eigen::Vector2cd& x) -> Eigen::Vector2cd { return s.drift * (x - centre); };
    auto fc = [&](const Eigen::Matrix2cd& x) -> Eigen::Matrix2cd {
        return s.drift * x + x * s.drift.transpose() + s.diffusion;
    };
    for (int i = 0; i < steps; ++i) {
        const Eigen::Vector2cd k1 = fm(m), k2 = fm(m + 0.5 * h * k1), k3 = fm(m + 0.5 * h * k2), k4 = fm(m + h * k3);
        m += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Eigen::Matrix2cd c1 = fc(C), c2 = fc(C + 0.5 * h * c1), c3 = fc(C + 0.5 * h * c2), c4 = fc(C + h * c3);
        C += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
    }
    return {m(0), C};
}

double max_abs(const Eigen::Matrix2cd& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("density is normalised") {
    GaussianState g;
    g.mean_gamma = 0.3;
    g.mean_N = -2.0;
    g.var_gamma = 0.04;
    g.var_N = 9.0;
    g.cov_gammaN = 0.35;
    const int n = 400;
    const double hx = 12 * std::sqrt(g.var_gamma) / n, hy = 12 * std::sqrt(g.var_N) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            sum += g.density(g.mean_gamma - 6 * std::sqrt(g.var_gamma) + i * hx,
                             g.mean_N - 6 * std::sqrt(g.var_N) + j * hy);
    CHECK(sum * hx * hy == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closed-form propagator matches the moment equations") {
    const SystemParams& p = ref();
    for (Branch b : {Branch::plus, Branch::minus}) {
        for (Mode m : {Mode::reversible, Mode::irreversible}) {
            const FokkerPlanckSpec s = diagonal_spec(p, b, m);
            const Eigen::Matrix2cd c0 = initial_alpha_covariance(p, b);
            const double t = 0.37 * p.T0;
            const AlphaMoments exact = wang_uhlenbeck(s, 0.0, c0, t);
            const AlphaMoments num = moments_rk4(s, 0.0, c0, t, 40000);
            CHECK(std::abs(exact.mean - num.mean) < 1e-7 * (1.0 + std::abs(num.mean)));
            CHECK(max_abs(exact.cov - num.cov) < 1e-7 * (1.0 + max_abs(num.cov)));
        }
    }
}

TEST_CASE("general drift goes through the matrix exponential") {
    FokkerPlanckSpec s;
    s.drift << cplx(-0.3, -1.0), cplx(0.2, 0.1), cplx(0.2, -0.1), cplx(-0.3, 1.0);
    s.diffusion << cplx(0.05, 0.02), 0.4, 0.4, cplx(0.05, -0.02);
    s.displacement = cplx(0.5, -0.25);
    Eigen::Matrix2cd c0;
    c0 << cplx(0.1, 0.05), 0.7, 0.7, cplx(0.1, -0.05);
    const AlphaMoments exact = wang_uhlenbeck(s, cplx(1.0, 0.5), c0, 2.5);
    const AlphaMoments num = moments_rk4(s, cplx(1.0, 0.5), c0, 2.5, 20000);
    CHECK(std::abs(exact.mean - num.mean) < 1e-10);
    CHECK(max_abs(exact.cov - num.cov) < 1e-10);
}

TEST_CASE("diagonal fast path agrees with the general path") {
    const SystemParams& p = ref();
    FokkerPlanckSpec s = diagonal_spec(p, Branch::plus, Mode::irreversible);
    const Eigen::Matrix2cd c0 = initial_alpha_covariance(p, Branch::plus);
    const double t = 0.8 * p.T0;
    const AlphaMoments fast = wang_uhlenbeck(s, 0.0, c0, t);
    // A negligible off-diagonal drift forces the Van Loan branch.
    s.drift(0, 1) = s.drift(1, 0) = 1e-30;
    const AlphaMoments slow = wang_uhlenbeck(s, 0.0, c0, t);
    CHECK(std::abs(fast.mean - slow.mean) < 1e-9 * std::abs(fast.mean));
    CHECK(max_abs(fast.cov - slow.cov) < 1e-9 * max_abs(fast.cov));
}

TEST_CASE("initial covariance is the vacuum when the scalings coincide") {
    PhysicalInputs in = quantronium_inputs();
    in.E_J = 0.0;
    const SystemParams p = build_system(in);
    const Eigen::Matrix2cd c = initial_alpha_covariance(p, Branch::plus);
    CHECK(std::abs(c(0, 0)) < 1e-15);
    CHECK(c(0, 1).real() == doctest::Approx(0.5));
}

TEST_CASE("initial state is the cross-scaled ground state in phase and charge") {
    const SystemParams& p = ref();
    for (Branch b : {Branch::plus, Branch::minus}) {
        const GaussianState g = evolve_diagonal(p, b, Mode::reversible, 0.0);
        CHECK(g.var_gamma == doctest::Approx(p.lambda_cross / 2.0));
        CHECK(g.var_N == doctest::Approx(1.0 / (2.0 * p.lambda_cross)));
        CHECK(std::abs(g.cov_gammaN) < 1e-14);
        CHECK(g.det() == doctest::Approx(0.25));
    }
}

TEST_CASE("reversible evolution preserves the determinant") {
    const SystemParams& p = ref();
    for (int k = 0; k <= 20; ++k) {
        const double t = k * 0.2 * p.T0;
        CHECK(evolve_diagonal(p, Branch::minus, Mode::reversible, t).det() == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("irreversible determinant never decreases") {
    const SystemParams& p = ref();
    double prev = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double d = evolve_diagonal(p, Branch::plus, Mode::irreversible, k * 0.01 * p.T0).det();
        CHECK(d >= prev * (1.0 - 1e-14));
        prev = d;
    }
}

TEST_CASE("charge variance grows at the Poisson rate over short times") {
    const SystemParams& p = ref();
    const double t = 1e-4 / p.omega_cross;
    const double grow = evolve_diagonal(p, Branch::plus, Mode::irreversible, t).var_N -
                        evolve_diagonal(p, Branch::plus, Mode::reversible, t).var_N;
    CHECK(grow == doctest::Approx(std::abs(p.E_b) * t).epsilon(1e-6));
}

TEST_CASE("alpha and phase-charge moments round-trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        GaussianState g;
        g.mean_gamma = 2 * u(rng);
        g.mean_N = 50 * u(rng);
        g.var_gamma = 0.01 + std::abs(u(rng));
        g.var_N = 1.0 + 30 * std::abs(u(rng));
        g.cov_gammaN = 0.9 * u(rng) * std::sqrt(g.var_gamma * g.var_N);
        const double lambda = 0.005 + 0.1 * std::abs(u(rng));
        const AlphaMoments a = from_phase_charge(g, lambda);
        const GaussianState back = to_phase_charge(a.mean, a.cov, lambda);
        CHECK(back.mean_gamma == doctest::Approx(g.mean_gamma).epsilon(1e-12));
        CHECK(back.mean_N == doctest::Approx(g.mean_N).epsilon(1e-12));
        CHECK(back.var_gamma == doctest::Approx(g.var_gamma).epsilon(1e-12));
        CHECK(back.var_N == doctest::Approx(g.var_N).epsilon(1e-12));
        CHECK(back.cov_gammaN == doctest::Approx(g.cov_gammaN).epsilon(1e-12));
    }
}

TEST_CASE("bad arguments") {
    CHECK_THROWS_AS(to_phase_charge(0.0, Eigen::Matrix2cd::Identity(), 0.0), ParameterError);
    CHECK_THROWS_AS(wang_uhlenbeck(FokkerPlanckSpec{}, 0.0, Eigen::Matrix2cd::Identity(), -1.0), ParameterError);
}
