#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "ibc/coeffode.hpp"
#include "ibc/params.hpp"

namespace ibc {

using cplx = std::complex<double>;

// Pure single-mode Gaussian psi ~ exp(-sigma/2 (gamma - <gamma>)^2 + i <N> gamma).
struct GaussMoments {
    double mean_gamma = 0.0;
    double mean_N = 0.0;
    cplx sigma;
    double var_gamma = 0.0;
};

// Driven oscillator H = omega a'a +- chi (a + a')^2 + eps (a + a') in the cross scaling.
struct OscillatorMapping {
    double omega = 0.0;
    double chi = 0.0;
    double epsilon = 0.0;
    double lambda = 0.0;
};

OscillatorMapping oscillator_mapping(const SystemParams& p);
GaussMoments moments_reversible(const SystemParams& p, Branch b, double t);

// Moment assembly of W_x without corrections (phase angle set to zero).
CoeffState offdiag_uncorrected(const SystemParams& p, double t);

// The same assembly with the three corrections needed to solve the coefficient
// equations: d changes sign, the normalisation is 1/pi rather than 4/pi, and the
// dynamical phase of each branch is restored in Im f.
CoeffState offdiag_closedform(const SystemParams& p, double t);
std::vector<CoeffState> offdiag_closedform_series(const SystemParams& p, const std::vector<double>& t_grid);

// ---- transformation-of-variables solution ----

struct TovState {
    cplx lambda1, lambda2;
    cplx c1, c2, c3, c4;
    cplx P;
};

struct PSample {
    double t = 0.0;
    cplx P, dP, d2P;
};

struct CdeSample {
    cplx c, d, e;
};

struct AbSample {
    cplx a, b;
};

enum class PSource { closed_form, quartic };

std::pair<cplx, cplx> tov_rates(const SystemParams& p, Mode m);

// Throws SingularAmplitudeError when I = 0: the amplitudes divide by I.
TovState tov_P(const SystemParams& p, Mode m, double t);
std::vector<PSample> tov_P_closed(const SystemParams& p, Mode m, const std::vector<double>& t_grid);

// Integrates the fourth-order equation for P from the Taylor jet of the
// (z, zbar, u) system at the initial coefficients.
std::vector<PSample> tov_P_quartic(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                         const OdeTolerances& tol = {});
// Same, with P and its first three derivatives at t = 0 supplied explicitly.
std::vector<PSample> tov_P_quartic(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                         const std::array<cplx, 4>& jet, const OdeTolerances& tol = {});
// P, P', P'', P''' at t = 0 from the same jet.
std::array<cplx, 4> tov_initial_jet(const SystemParams& p, Mode m);

// Throws PoleError when |1 - P| < 1e-10.
std::vector<CdeSample> tov_cde(const std::vector<PSample>& series, const SystemParams& p, Mode m);

std::vector<AbSample> tov_y(const SystemParams& p, Mode m, const std::vector<double>& t_grid, PSource source,
                                  const OdeTolerances& tol = {});

}  // namespace ibc
