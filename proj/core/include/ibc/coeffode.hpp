#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ibc/params.hpp"

namespace ibc {

using cplx = std::complex<double>;

// W_x(gamma, N) = exp(a gamma + b N + c gamma^2 + d gamma N + e N^2 + f)
struct CoeffState {
    cplx a, b, c, d, e, f;

    std::array<double, 12> pack() const;
    static CoeffState unpack(const std::array<double, 12>& x);
};

struct DriveConstants {
    double G = 0.0;        // -E_b
    double E_drive = 0.0;  // E_J / 4
    double I_damp = 0.0;   // 0 or -2|E_b|
    double omega = 0.0;    // omega_cross
    double lambda = 0.0;   // lambda_cross
};

struct OdeTolerances {
    double rel = 1e-10;
    double abs = 1e-12;
};

DriveConstants make_drive_constants(const SystemParams& p, Mode m);
CoeffState initial_coeffs(const SystemParams& p);
CoeffState derivative(const CoeffState& s, const DriveConstants& k);

// t_grid must start at 0 and be non-decreasing. Throws IntegrabilityError when
// Re c or Re e leaves the negative half-plane or a coefficient stops being finite.
std::vector<CoeffState> integrate(const SystemParams& p, const DriveConstants& k, const std::vector<double>& t_grid,
                                  const OdeTolerances& tol = {});
std::vector<CoeffState> integrate(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                  const OdeTolerances& tol = {});
CoeffState integrate_to(const SystemParams& p, Mode m, double t, const OdeTolerances& tol = {});

}  // namespace ibc
