#pragma once

#include <complex>

#include <Eigen/Dense>

#include "ibc/params.hpp"

namespace ibc {

using cplx = std::complex<double>;

// Real-coordinate description of W+ or W-: gamma is the junction phase, N the
// number of tunnelled pairs.
struct GaussianState {
    double mean_gamma = 0.0;
    double mean_N = 0.0;
    double var_gamma = 0.0;
    double var_N = 0.0;
    double cov_gammaN = 0.0;

    double det() const { return var_gamma * var_N - cov_gammaN * cov_gammaN; }
    // Normalised so the integral over the plane is exactly one.
    double density(double gamma, double N) const;
};

// Linear Fokker-Planck equation for z = (alpha, alpha*):
//   dW/dt = -div(M (z - z_c) W) + 1/2 div(N_diff grad W),  z_c = (d, d*).
struct FokkerPlanckSpec {
    Eigen::Matrix2cd drift = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd diffusion = Eigen::Matrix2cd::Zero();
    cplx displacement{0.0, 0.0};
};

// Mean <alpha> and symmetric covariance in the (alpha, alpha*) basis:
// cov(0,0) = <da da>, cov(0,1) = <{da, da*}>/2.
struct AlphaMoments {
    cplx mean{0.0, 0.0};
    Eigen::Matrix2cd cov = Eigen::Matrix2cd::Zero();
};

AlphaMoments wang_uhlenbeck(const FokkerPlanckSpec& spec, cplx mean0, const Eigen::Matrix2cd& cov0, double t);

FokkerPlanckSpec diagonal_spec(const SystemParams& p, Branch b, Mode m);
Eigen::Matrix2cd initial_alpha_covariance(const SystemParams& p, Branch b);

AlphaMoments evolve_alpha(const SystemParams& p, Branch b, Mode m, double t);
GaussianState evolve_diagonal(const SystemParams& p, Branch b, Mode m, double t);

GaussianState to_phase_charge(cplx alpha_mean, const Eigen::Matrix2cd& alpha_cov, double lambda);
AlphaMoments from_phase_charge(const GaussianState& g, double lambda);

}  // namespace ibc
