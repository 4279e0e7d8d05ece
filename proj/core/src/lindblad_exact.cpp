#include "ibc/lindblad_exact.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ibc/errors.hpp"
#include "ibc/params.hpp"

namespace ibc {

namespace {

SparseC from_triplets(int dim, const std::vector<Eigen::Triplet<cplx>>& t) {
    SparseC m(dim, dim);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

}  // namespace

JunctionOps build_operators(int n_max, double E_C0, double E_J0) {
    if (n_max < 2) throw ParameterError("charge window needs n_max >= 2");
    const int dim = 2 * n_max + 1;
    std::vector<Eigen::Triplet<cplx>> n, up, down, h;
    for (int i = 0; i < dim; ++i) {
        const double q = i - n_max;
        n.emplace_back(i, i, q);
        h.emplace_back(i, i, E_C0 * q * q + E_J0);
        if (i + 1 < dim) {
            up.emplace_back(i + 1, i, 1.0);
            down.emplace_back(i, i + 1, 1.0);
            h.emplace_back(i + 1, i, -0.5 * E_J0);
            h.emplace_back(i, i + 1, -0.5 * E_J0);
        }
    }
    JunctionOps ops;
    ops.n_max = n_max;
    ops.N_op = from_triplets(dim, n);
    ops.eta_dag = from_triplets(dim, up);
    ops.eta = from_triplets(dim, down);
    ops.H = from_triplets(dim, h);
    ops.h_diag.resize(dim);
    for (int i = 0; i < dim; ++i) ops.h_diag(i) = E_C0 * (i - n_max) * (i - n_max) + E_J0;
    ops.h_hop = -0.5 * E_J0;
    return ops;
}

Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho, const JunctionOps& ops, double E_b) {
    const cplx minus_i(0.0, -1.0);
    Eigen::MatrixXcd hr = ops.H * rho;
    Eigen::MatrixXcd out = minus_i * (hr - hr.adjoint());  // H and rho Hermitian: rho H = (H rho)'
    if (E_b != 0.0) {
        const SparseC& L = E_b >= 0.0 ? ops.eta_dag : ops.eta;
        const SparseC& Ld = E_b >= 0.0 ? ops.eta : ops.eta_dag;
        Eigen::MatrixXcd lr = L * rho;
        out.noalias() += std::abs(E_b) * (lr * Ld);
        out -= std::abs(E_b) * rho;
    }
    return out;
}

void rhs_stencil(const Eigen::MatrixXcd& rho, const JunctionOps& ops, double E_b, Eigen::MatrixXcd& out) {
    const Eigen::Index D = rho.rows();
    out.resize(D, D);
    const double* d = ops.h_diag.data();
    const double h = ops.h_hop;
    const double g = std::abs(E_b);
    const bool raise = E_b >= 0.0;
    for (Eigen::Index j = 0; j < D; ++j) {
        const cplx* col = &rho(0, j);
        const cplx* left = j > 0 ? &rho(0, j - 1) : nullptr;
        const cplx* right = j + 1 < D ? &rho(0, j + 1) : nullptr;
        cplx* o = &out(0, j);
        for (Eigen::Index i = 0; i < D; ++i) {
            // [H, rho]_ij = (d_i - d_j) rho_ij + h (rho_{i-1,j} + rho_{i+1,j} - rho_{i,j-1} - rho_{i,j+1})
            cplx hop = 0.0;
            if (i > 0) hop += col[i - 1];
            if (i + 1 < D) hop += col[i + 1];
            if (left) hop -= left[i];
            if (right) hop -= right[i];
            const cplx comm = (d[i] - d[j]) * col[i] + h * hop;
            cplx jump = -col[i];
            if (raise) {
                if (i > 0 && left) jump += left[i - 1];
            } else {
                if (i + 1 < D && right) jump += right[i + 1];
            }
            o[i] = cplx(comm.imag(), -comm.real()) + g * jump;
        }
    }
}

double spectral_bound(const JunctionOps& ops) {
    // Gershgorin bound on ||H||.
    double best = 0.0;
    const SparseC ht = ops.H.transpose();
    for (int k = 0; k < ht.outerSize(); ++k) {
        double row = 0.0;
        for (SparseC::InnerIterator it(ht, k); it; ++it) row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

DenseState evolve(const DenseState& rho0, const JunctionOps& ops, double E_b, double t_final, double dt,
                  const LindbladObserver& observe) {
    if (rho0.n_max != ops.n_max) throw ParameterError("state and operators use different charge windows");
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw ParameterError("need dt > 0 and t_final >= 0");
    if (dt * (spectral_bound(ops) + std::abs(E_b)) >= 0.1) {
        std::ostringstream os;
        os << "time step " << dt << " s violates dt (||H|| + |E_b|) < 0.1";
        throw ParameterError(os.str());
    }
    const long steps = std::max(1L, static_cast<long>(std::ceil(t_final / dt - 1e-9)));
    const double h = t_final / static_cast<double>(steps);

    Eigen::MatrixXcd rho = rho0.matrix;
    Eigen::MatrixXcd k(rho.rows(), rho.cols()), acc(rho.rows(), rho.cols()), probe(rho.rows(), rho.cols());
    if (observe) observe(0.0, rho);
    for (long s = 0; s < steps; ++s) {
        rhs_stencil(rho, ops, E_b, k);
        acc = k;
        probe = rho + 0.5 * h * k;
        rhs_stencil(probe, ops, E_b, k);
        acc += 2.0 * k;
        probe = rho + 0.5 * h * k;
        rhs_stencil(probe, ops, E_b, k);
        acc += 2.0 * k;
        probe = rho + h * k;
        rhs_stencil(probe, ops, E_b, k);
        acc += k;
        rho += (h / 6.0) * acc;
        if (observe) observe(h * static_cast<double>(s + 1), rho);
    }

    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
    if (lowest < -1e-6) {
        std::ostringstream os;
        os << "density matrix lost positivity (lowest eigenvalue " << lowest << "); enlarge n_max beyond "
           << ops.n_max;
        throw TruncationError(os.str());
    }
    return {ops.n_max, rho};
}

double sin_gamma_expectation(const Eigen::MatrixXcd& rho) {
    // sin(gamma) = (eta' - eta) / 2i; Tr(eta' rho) sums rho(n, n+1).
    cplx up = 0.0, down = 0.0;
    const Eigen::Index dim = rho.rows();
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        up += rho(i, i + 1);
        down += rho(i + 1, i);
    }
    return ((up - down) / cplx(0.0, 2.0)).real();
}

double current_expectation(const DenseState& rho, const JunctionOps& ops, double I_C) {
    if (rho.n_max != ops.n_max) throw ParameterError("state and operators use different charge windows");
    return I_C * sin_gamma_expectation(rho.matrix);
}

double number_expectation(const Eigen::MatrixXcd& rho, int n_max) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho.rows(); ++i) s += (static_cast<double>(i) - n_max) * rho(i, i).real();
    return s;
}

double boundary_population(const Eigen::MatrixXcd& rho, int edge) {
    const Eigen::Index dim = rho.rows();
    double s = 0.0;
    for (Eigen::Index i = 0; i < edge && i < dim; ++i) s += rho(i, i).real() + rho(dim - 1 - i, dim - 1 - i).real();
    return s;
}

DenseState charge_state(int n_max, int n) {
    if (std::abs(n) > n_max) throw ParameterError("charge state outside the window");
    DenseState s{n_max, Eigen::MatrixXcd::Zero(2 * n_max + 1, 2 * n_max + 1)};
    s.matrix(n + n_max, n + n_max) = 1.0;
    return s;
}

DenseState phase_gaussian(int n_max, double gamma0, double var_N) {
    const int dim = 2 * n_max + 1;
    Eigen::VectorXcd psi(dim);
    for (int i = 0; i < dim; ++i) {
        const double n = i - n_max;
        psi(i) = std::exp(cplx(-n * n / (4.0 * var_N), -n * gamma0));
    }
    psi.normalize();
    return {n_max, psi * psi.adjoint()};
}

int default_n_max(double nu) {
    if (!(nu > 0.0)) throw ParameterError("nu must be positive");
    return std::max(8, static_cast<int>(std::ceil(3.0 * std::pow(nu, -0.25))) + 4);
}

ClassicalLimitPoint classical_limit_run(double nu, const ClassicalLimitSetup& setup) {
    if (!(setup.bias_ratio > 0.0 && setup.bias_ratio < 1.0))
        throw ParameterError("bias ratio must lie in (0, 1) so the washboard keeps a well");
    const double EJ0 = setup.E_J0 > 0.0 ? setup.E_J0 : convert_energy(quantronium_inputs().E_J0);
    const double EC0 = nu * EJ0;
    const double Eb = setup.bias_ratio * EJ0;

    // Harmonic ground state of the tilted well.
    const double g0 = std::asin(setup.bias_ratio);
    const double lambda = std::sqrt(2.0 * EC0 / (EJ0 * std::cos(g0)));
    const double var_N = 1.0 / (2.0 * lambda);
    const double plasma = std::sqrt(2.0 * EC0 * EJ0 * std::cos(g0));
    const double T = setup.periods * 2.0 * std::acos(-1.0) / plasma;

    // Charge spread: initial variance plus |E_b| T from the jumps.
    const double spread = std::sqrt(var_N + Eb * T);
    const int n_max = std::max(default_n_max(nu), static_cast<int>(std::ceil(7.0 * spread)) + 4);
    const JunctionOps ops = build_operators(n_max, EC0, EJ0);
    const double dt = setup.step_fraction / (spectral_bound(ops) + Eb);

    double acc = 0.0, prev_t = 0.0, prev_v = 0.0;
    long steps = -1;
    auto observe = [&](double t, const Eigen::MatrixXcd& rho) {
        const double v = sin_gamma_expectation(rho);
        if (steps >= 0) acc += 0.5 * (t - prev_t) * (v + prev_v);
        prev_t = t;
        prev_v = v;
        ++steps;
    };
    const DenseState out = evolve(phase_gaussian(n_max, g0, var_N), ops, Eb, T, dt, observe);

    ClassicalLimitPoint r;
    r.nu = nu;
    r.dim = out.dim();
    r.steps = steps;
    r.mean_sin = acc / T;
    r.target = setup.bias_ratio;
    r.rel_error = std::abs(r.mean_sin - r.target) / r.target;
    r.trace = out.matrix.trace().real();
    r.boundary = boundary_population(out.matrix);
    return r;
}

}  // namespace ibc
