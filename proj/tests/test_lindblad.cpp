#include <doctest.h>

#include <cmath>
#include <random>

#include "ibc/errors.hpp"
#include "ibc/lindblad_exact.hpp"
#include "ibc/params.hpp"

using namespace ibc;

namespace {

Eigen::MatrixXcd dense(const SparseC& s) { return Eigen::MatrixXcd(s); }

Eigen::MatrixXcd random_density(int dim, std::mt19937_64& rng, int margin) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int i = margin; i < dim - margin; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
    Eigen::MatrixXcd r = a * a.adjoint();
    return r / r.trace();
}

}  // namespace

TEST_CASE("ladder operators shift the charge by one") {
    const JunctionOps ops = build_operators(6, 1.0, 10.0);
    const Eigen::MatrixXcd N = dense(ops.N_op), up = dense(ops.eta_dag), down = dense(ops.eta);
    CHECK((N * up - up * N - up).norm() < 1e-14);
    CHECK((N * down - down * N + down).norm() < 1e-14);
    // eta eta' is the identity except on the top state, which eta' annihilates.
    const Eigen::MatrixXcd prod = down * up;
    CHECK(prod.diagonal().real().head(12).isOnes());
    CHECK(std::abs(prod(12, 12)) == 0.0);
    CHECK((dense(ops.H) - dense(ops.H).adjoint()).norm() == 0.0);
}

TEST_CASE("stencil kernel equals the sparse right-hand side") {
    std::mt19937_64 rng(11);
    const JunctionOps ops = build_operators(9, 0.37, 12.5);
    for (double Eb : {0.0, 3.1, -2.4}) {
        const Eigen::MatrixXcd rho = random_density(19, rng, 0);
        Eigen::MatrixXcd fast;
        rhs_stencil(rho, ops, Eb, fast);
        CHECK((fast - rhs(rho, ops, Eb)).norm() < 1e-12 * rhs(rho, ops, Eb).norm());
    }
}

TEST_CASE("generator preserves trace and Hermiticity away from the window edge") {
    std::mt19937_64 rng(3);
    const JunctionOps ops = build_operators(10, 0.5, 8.0);
    const Eigen::MatrixXcd rho = random_density(21, rng, 1);
    const Eigen::MatrixXcd d = rhs(rho, ops, 2.0);
    CHECK(std::abs(d.trace()) < 1e-12);
    CHECK((d - d.adjoint()).norm() < 1e-12);
}

TEST_CASE("bias transfers pairs at rate |E_b|") {
    const JunctionOps ops = build_operators(8, 0.2, 5.0);
    const DenseState s = charge_state(8, 0);
    for (double Eb : {1.5, -1.5}) {
        const Eigen::MatrixXcd d = rhs(s.matrix, ops, Eb);
        CHECK(number_expectation(d, 8) == doctest::Approx(Eb));
    }
}

TEST_CASE("charge and phase states") {
    CHECK(number_expectation(charge_state(5, -3).matrix, 5) == doctest::Approx(-3.0));
    CHECK_THROWS_AS(charge_state(5, 6), ParameterError);
    const double g0 = 0.4, varN = 9.0;
    const DenseState s = phase_gaussian(40, g0, varN);
    CHECK(s.matrix.trace().real() == doctest::Approx(1.0));
    CHECK(sin_gamma_expectation(s.matrix) == doctest::Approx(std::sin(g0) * std::exp(-1.0 / (8.0 * varN))).epsilon(1e-9));
    CHECK(boundary_population(s.matrix) < 1e-30);
}

TEST_CASE("evolution keeps a valid density matrix") {
    const JunctionOps ops = build_operators(20, 0.3, 6.0);
    const double Eb = 1.8;
    const double dt = 0.05 / (spectral_bound(ops) + Eb);
    const DenseState s = evolve(phase_gaussian(20, 0.2, 4.0), ops, Eb, 2.0, dt);
    CHECK(s.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK((s.matrix - s.matrix.adjoint()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.matrix);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("observer sees every step") {
    const JunctionOps ops = build_operators(6, 0.3, 2.0);
    const double dt = 0.05 / (spectral_bound(ops) + 0.5);
    int calls = 0;
    double last = -1.0;
    evolve(charge_state(6, 0), ops, 0.5, 0.5, dt, [&](double t, const Eigen::MatrixXcd&) {
        ++calls;
        CHECK(t > last);
        last = t;
    });
    CHECK(calls >= 2);
    CHECK(last == doctest::Approx(0.5));
}

TEST_CASE("stepper refuses unstable or mismatched input") {
    const JunctionOps ops = build_operators(6, 0.3, 2.0);
    CHECK_THROWS_AS(evolve(charge_state(6, 0), ops, 0.5, 1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(evolve(charge_state(5, 0), ops, 0.5, 1.0, 1e-3), ParameterError);
    CHECK_THROWS_AS(evolve(charge_state(6, 0), ops, 0.5, 1.0, -1e-3), ParameterError);
    CHECK_THROWS_AS(build_operators(1, 1.0, 1.0), ParameterError);
}

TEST_CASE("Gershgorin bound dominates the spectrum") {
    const JunctionOps ops = build_operators(7, 0.4, 3.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(ops.H));
    CHECK(spectral_bound(ops) >= es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("default charge window") {
    CHECK(default_n_max(1e-2) == 14);
    CHECK(default_n_max(1.0) == 8);
    CHECK_THROWS_AS(default_n_max(0.0), ParameterError);
}

TEST_CASE("short classical-limit run tracks the bias") {
    ClassicalLimitSetup setup;
    setup.periods = 1.0;
    const ClassicalLimitPoint r = classical_limit_run(1e-2, setup);
    CHECK(r.target == doctest::Approx(0.3));
    CHECK(r.rel_error < 0.05);
    CHECK(r.trace == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.boundary < 1e-6);
}
