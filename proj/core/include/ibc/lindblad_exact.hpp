#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace ibc {

using cplx = std::complex<double>;
using SparseC = Eigen::SparseMatrix<cplx>;

// Density matrix over the charge window n in [-n_max, n_max]; index i <-> n = i - n_max.
struct DenseState {
    int n_max = 0;
    Eigen::MatrixXcd matrix;

    int dim() const { return 2 * n_max + 1; }
};

struct JunctionOps {
    int n_max = 0;
    SparseC N_op;
    SparseC eta;      // |n> -> |n-1>, annihilates the lowest state
    SparseC eta_dag;  // |n> -> |n+1>, annihilates the highest state
    SparseC H;
    // Tridiagonal form of H, used by the stepper's stencil kernel.
    Eigen::VectorXd h_diag;
    double h_hop = 0.0;
};

JunctionOps build_operators(int n_max, double E_C0, double E_J0);

// -i[H, rho] + |E_b| (L rho L' - rho), L = eta' for E_b >= 0 and eta otherwise.
Eigen::MatrixXcd rhs(const Eigen::MatrixXcd& rho, const JunctionOps& ops, double E_b);
// Same derivative evaluated with a stencil on the tridiagonal H; writes into `out`.
void rhs_stencil(const Eigen::MatrixXcd& rho, const JunctionOps& ops, double E_b, Eigen::MatrixXcd& out);

// Observer sees (t, rho) after every step, including t = 0.
using LindbladObserver = std::function<void(double, const Eigen::MatrixXcd&)>;

// Fixed-step RK4. Requires dt (||H|| + |E_b|) < 0.1; throws TruncationError if
// the final state has an eigenvalue below -1e-6.
DenseState evolve(const DenseState& rho0, const JunctionOps& ops, double E_b, double t_final, double dt,
                  const LindbladObserver& observe = {});

double spectral_bound(const JunctionOps& ops);

double sin_gamma_expectation(const Eigen::MatrixXcd& rho);
double current_expectation(const DenseState& rho, const JunctionOps& ops, double I_C);
double number_expectation(const Eigen::MatrixXcd& rho, int n_max);
// Population in the outermost `edge` charge states on either side.
double boundary_population(const Eigen::MatrixXcd& rho, int edge = 2);

DenseState charge_state(int n_max, int n);
// psi_n ~ exp(-n^2 / (4 var_N) - i n gamma0), normalised on the window.
DenseState phase_gaussian(int n_max, double gamma0, double var_N);

int default_n_max(double nu);

struct ClassicalLimitPoint {
    double nu = 0.0;
    int dim = 0;
    long steps = 0;
    double mean_sin = 0.0;    // time average of <sin gamma>
    double target = 0.0;      // E_b / E_J0 = I_bias / I_C
    double rel_error = 0.0;
    double trace = 0.0;
    double boundary = 0.0;
};

struct ClassicalLimitSetup {
    double bias_ratio = 0.3;
    double periods = 2.0;      // averaging window in plasma periods of the tilted well
    double E_J0 = 0.0;         // rad/s; 0 selects the Quantronium readout junction
    double step_fraction = 0.09;
};

ClassicalLimitPoint classical_limit_run(double nu, const ClassicalLimitSetup& setup = {});

}  // namespace ibc
