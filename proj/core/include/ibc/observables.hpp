#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ibc/coeffode.hpp"
#include "ibc/gaussian.hpp"
#include "ibc/params.hpp"

namespace ibc {

struct WignerGrid {
    std::vector<double> gamma_axis;
    std::vector<double> N_axis;
    std::vector<double> values;  // row-major, gamma outer
    double t = 0.0;
    std::vector<std::pair<std::string, std::string>> metadata;

    double at(std::size_t i, std::size_t j) const { return values[i * N_axis.size() + j]; }
};

struct GridBounds {
    double gamma_min = 0.0, gamma_max = 0.0;
    double N_min = 0.0, N_max = 0.0;
};

struct GridSpec {
    std::size_t n_gamma = 401;
    std::size_t n_N = 401;
    std::optional<GridBounds> bounds;  // default: +-5 sigma around both diagonal components
    double coverage_sigmas = 5.0;
};

struct BlochSeries {
    std::vector<double> times;
    std::vector<double> lengths;
    std::vector<double> sx;
    std::vector<double> sy;
};

struct PauliExpectations {
    double sx = 0.0, sy = 0.0, sz = 0.0;
};

// The exponent's real part is clamped at this value; `clamped` counts hits.
inline constexpr double kExponentCeiling = 700.0;

cplx eval_offdiag(const CoeffState& s, double gamma, double N, int* clamped = nullptr);

// Closed-form integral of W_x over the plane: equals sx + i sy.
// Throws IntegrabilityError if the Gaussian does not decay.
cplx offdiag_integral(const CoeffState& s, double t = 0.0);
// sqrt(4ce - d^2) on the convergent branch (product of principal roots of the eigenvalues).
cplx convergent_sqrt_det(const CoeffState& s, double t = 0.0);

double bloch_length(const CoeffState& s);
PauliExpectations pauli_from_coeffs(const CoeffState& s, double t = 0.0);
PauliExpectations pauli_expectations(const SystemParams& p, Mode m, double t, const OdeTolerances& tol = {});

BlochSeries bloch_series(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                         const OdeTolerances& tol = {});

GridBounds required_bounds(const SystemParams& p, Mode m, double t, double sigmas = 5.0);

// Values are the probability density of finding the qubit in the initial
// symmetric state, 1/2 [ (W+ + W-)/2 + Re W_x ], so the plane integral is in [0, 1].
WignerGrid assemble_ws(const SystemParams& p, Mode m, double t, const GridSpec& spec = {},
                       const OdeTolerances& tol = {});

enum class Axis { gamma, N };
// Density over `axis`, integrating out the other one with the trapezoid rule.
std::vector<double> marginal(const WignerGrid& g, Axis axis);
double grid_integral(const WignerGrid& g);

std::vector<double> linspace(double a, double b, std::size_t n);
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ibc
