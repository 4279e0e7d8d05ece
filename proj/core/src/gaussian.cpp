#include "ibc/gaussian.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "ibc/errors.hpp"

namespace ibc {

namespace {

// (e^{z t} - 1) / z, continuous through z = 0.
cplx phi1(cplx z, double t) {
    const cplx zt = z * t;
    if (std::abs(zt) < 1e-4) return t * (1.0 + zt / 2.0 + zt * zt / 6.0 + zt * zt * zt / 24.0);
    return (std::exp(zt) - 1.0) / z;
}

bool is_diagonal(const Eigen::Matrix2cd& m) { return m(0, 1) == 0.0 && m(1, 0) == 0.0; }

}  // namespace

double GaussianState::density(double gamma, double N) const {
    const double D = det();
    const double x = gamma - mean_gamma;
    const double y = N - mean_N;
    const double q = (var_N * x * x - 2.0 * cov_gammaN * x * y + var_gamma * y * y) / D;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(D));
}

AlphaMoments wang_uhlenbeck(const FokkerPlanckSpec& spec, cplx mean0, const Eigen::Matrix2cd& cov0, double t) {
    if (t < 0.0) throw ParameterError("wang_uhlenbeck: negative time");
    const Eigen::Matrix2cd& M = spec.drift;
    const Eigen::Matrix2cd& N = spec.diffusion;
    const Eigen::Vector2cd centre(spec.displacement, std::conj(spec.displacement));
    const Eigen::Vector2cd z0(mean0, std::conj(mean0));

    AlphaMoments out;
    if (is_diagonal(M)) {
        const cplx m0 = M(0, 0), m1 = M(1, 1);
        const Eigen::Vector2cd decay(std::exp(m0 * t), std::exp(m1 * t));
        out.mean = centre(0) + decay(0) * (z0(0) - centre(0));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.cov(i, j) = decay(i) * cov0(i, j) * decay(j) + N(i, j) * phi1(M(i, i) + M(j, j), t);
        return out;
    }

    // Van Loan: exp([[-M, N], [0, M^T]] t) packs the diffusion integral into its upper-right block.
    Eigen::Matrix<cplx, 4, 4> A = Eigen::Matrix<cplx, 4, 4>::Zero();
    A.topLeftCorner<2, 2>() = -M;
    A.topRightCorner<2, 2>() = N;
    A.bottomRightCorner<2, 2>() = M.transpose();
    const Eigen::Matrix<cplx, 4, 4> F = (A * t).exp();
    const Eigen::Matrix2cd eMt = F.bottomRightCorner<2, 2>().transpose();
    const Eigen::Vector2cd z = centre + eMt * (z0 - centre);
    out.mean = z(0);
    out.cov = eMt * cov0 * eMt.transpose() + F.bottomRightCorner<2, 2>().transpose() * F.topRightCorner<2, 2>();
    return out;
}

FokkerPlanckSpec diagonal_spec(const SystemParams& p, Branch b, Mode m) {
    const double w = p.omega(b);
    FokkerPlanckSpec s;
    s.drift(0, 0) = cplx(0.0, -w);
    s.drift(1, 1) = cplx(0.0, w);
    s.displacement = p.E_b * p.Gamma(b) / w;
    if (m == Mode::irreversible) {
        const double k = std::abs(p.E_b) * p.Gamma(b) * p.Gamma(b);
        s.diffusion << -k, k, k, -k;
    }
    return s;
}

Eigen::Matrix2cd initial_alpha_covariance(const SystemParams& p, Branch b) {
    const double lb = p.lambda(b);
    const double lx = p.lambda_cross;
    const double s = 1.0 / (4.0 * lb * lx);
    const double diag = s * (lx * lx - lb * lb);
    const double off = s * (lb * lb + lx * lx);
    Eigen::Matrix2cd c;
    c << diag, off, off, diag;
    return c;
}

AlphaMoments evolve_alpha(const SystemParams& p, Branch b, Mode m, double t) {
    return wang_uhlenbeck(diagonal_spec(p, b, m), 0.0, initial_alpha_covariance(p, b), t);
}

GaussianState evolve_diagonal(const SystemParams& p, Branch b, Mode m, double t) {
    const AlphaMoments am = evolve_alpha(p, b, m, t);
    return to_phase_charge(am.mean, am.cov, p.lambda(b));
}

GaussianState to_phase_charge(cplx alpha_mean, const Eigen::Matrix2cd& alpha_cov, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("to_phase_charge: lambda must be positive");
    const double c12 = alpha_cov(0, 1).real();
    const cplx c11 = alpha_cov(0, 0);
    const double var_x = 0.5 * (c12 + c11.real());
    const double var_y = 0.5 * (c12 - c11.real());
    const double cov_xy = 0.5 * c11.imag();

    GaussianState g;
    g.mean_gamma = std::sqrt(2.0 * lambda) * alpha_mean.real();
    g.mean_N = std::sqrt(2.0 / lambda) * alpha_mean.imag();
    g.var_gamma = 2.0 * lambda * var_x;
    g.var_N = (2.0 / lambda) * var_y;
    g.cov_gammaN = 2.0 * cov_xy;
    return g;
}

AlphaMoments from_phase_charge(const GaussianState& g, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("from_phase_charge: lambda must be positive");
    const double var_x = g.var_gamma / (2.0 * lambda);
    const double var_y = g.var_N * lambda / 2.0;
    const double cov_xy = g.cov_gammaN / 2.0;

    AlphaMoments am;
    am.mean = cplx(g.mean_gamma / std::sqrt(2.0 * lambda), g.mean_N / std::sqrt(2.0 / lambda));
    const cplx c11(var_x - var_y, 2.0 * cov_xy);
    const double c12 = var_x + var_y;
    am.cov << c11, c12, c12, std::conj(c11);
    return am;
}

}  // namespace ibc
