#include "ibc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ibc/errors.hpp"

namespace ibc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx exponent(const CoeffState& s, double g, double N) {
    return s.a * g + s.b * N + s.c * g * g + s.d * g * N + s.e * N * N + s.f;
}

void require_decay(const CoeffState& s, double t) {
    const double rc = s.c.real(), rd = s.d.real(), re = s.e.real();
    if (!(rc < 0.0) || !(rc * re - 0.25 * rd * rd > 0.0)) {
        std::ostringstream os;
        os << "W_x is not integrable at t = " << t << " s (Re c = " << rc << ", Re e = " << re
           << ", Re d = " << rd << ")";
        throw IntegrabilityError(os.str(), t);
    }
}

}  // namespace

cplx eval_offdiag(const CoeffState& s, double gamma, double N, int* clamped) {
    cplx q = exponent(s, gamma, N);
    if (q.real() > kExponentCeiling) {
        q.real(kExponentCeiling);
        if (clamped) ++*clamped;
    }
    return std::exp(q);
}

cplx convergent_sqrt_det(const CoeffState& s, double t) {
    require_decay(s, t);
    // A = -2 [[c, d/2], [d/2, e]] has positive-definite real part here, so both
    // eigenvalues sit in the right half-plane and their principal roots multiply
    // to the root selected by analytic continuation from the real Gaussian.
    const cplx tr = -2.0 * (s.c + s.e);
    const cplx det = 4.0 * s.c * s.e - s.d * s.d;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    return std::sqrt(l1) * std::sqrt(l2);
}

cplx offdiag_integral(const CoeffState& s, double t) {
    const cplx root = convergent_sqrt_det(s, t);
    const cplx det = 4.0 * s.c * s.e - s.d * s.d;
    const cplx quad = (s.b * s.b * s.c - s.a * s.b * s.d + s.a * s.a * s.e) / (-det);
    return kTwoPi / root * std::exp(s.f + quad);
}

double bloch_length(const CoeffState& s) { return std::abs(offdiag_integral(s)); }

PauliExpectations pauli_from_coeffs(const CoeffState& s, double t) {
    const cplx w = offdiag_integral(s, t);
    // Both diagonal components carry unit weight, so sigma_z vanishes identically.
    return {w.real(), w.imag(), 0.0};
}

PauliExpectations pauli_expectations(const SystemParams& p, Mode m, double t, const OdeTolerances& tol) {
    return pauli_from_coeffs(integrate_to(p, m, t, tol), t);
}

BlochSeries bloch_series(const SystemParams& p, Mode m, const std::vector<double>& t_grid, const OdeTolerances& tol) {
    const std::vector<CoeffState> states = integrate(p, m, t_grid, tol);
    BlochSeries out;
    out.times = t_grid;
    cplx prev_root;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const cplx root = convergent_sqrt_det(states[i], t_grid[i]);
        if (i > 0) {
            // Continuity cross-check: the sign that follows the previous sample
            // must agree with the convergent branch whenever the samples are
            // close enough for continuity to be meaningful.
            const double scale = std::max(std::abs(root), std::abs(prev_root));
            const double same = std::abs(root - prev_root) / scale;
            const double flipped = std::abs(root + prev_root) / scale;
            if (flipped < 0.5 && same > 0.5) {
                std::ostringstream os;
                os << "square-root branch jumped between t = " << t_grid[i - 1] << " and " << t_grid[i] << " s";
                throw BranchError(os.str());
            }
        }
        prev_root = root;
        const PauliExpectations e = pauli_from_coeffs(states[i], t_grid[i]);
        out.sx.push_back(e.sx);
        out.sy.push_back(e.sy);
        out.lengths.push_back(std::hypot(e.sx, e.sy));
    }
    return out;
}

GridBounds required_bounds(const SystemParams& p, Mode m, double t, double sigmas) {
    GridBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Branch br : {Branch::plus, Branch::minus}) {
        const GaussianState g = evolve_diagonal(p, br, m, t);
        const double sg = sigmas * std::sqrt(g.var_gamma);
        const double sn = sigmas * std::sqrt(g.var_N);
        b.gamma_min = std::min(b.gamma_min, g.mean_gamma - sg);
        b.gamma_max = std::max(b.gamma_max, g.mean_gamma + sg);
        b.N_min = std::min(b.N_min, g.mean_N - sn);
        b.N_max = std::max(b.N_max, g.mean_N + sn);
    }
    return b;
}

WignerGrid assemble_ws(const SystemParams& p, Mode m, double t, const GridSpec& spec, const OdeTolerances& tol) {
    if (spec.n_gamma < 2 || spec.n_N < 2) throw ParameterError("grid needs at least two points per axis");
    const GridBounds need = required_bounds(p, m, t, spec.coverage_sigmas);
    GridBounds use = spec.bounds.value_or(need);
    if (spec.bounds) {
        if (!(use.gamma_min < use.gamma_max) || !(use.N_min < use.N_max))
            throw ParameterError("grid bounds must be strictly ascending");
        const bool covered = use.gamma_min <= need.gamma_min && use.gamma_max >= need.gamma_max &&
                             use.N_min <= need.N_min && use.N_max >= need.N_max;
        if (!covered) {
            std::ostringstream os;
            os << "grid does not cover " << spec.coverage_sigmas << " sigma of both components; need gamma in ["
               << need.gamma_min << ", " << need.gamma_max << "], N in [" << need.N_min << ", " << need.N_max << "]";
            throw CoverageError(os.str());
        }
    }

    const GaussianState wp = evolve_diagonal(p, Branch::plus, m, t);
    const GaussianState wm = evolve_diagonal(p, Branch::minus, m, t);
    const CoeffState s = integrate_to(p, m, t, tol);

    WignerGrid g;
    g.t = t;
    g.gamma_axis = linspace(use.gamma_min, use.gamma_max, spec.n_gamma);
    g.N_axis = linspace(use.N_min, use.N_max, spec.n_N);
    g.values.resize(spec.n_gamma * spec.n_N);
    int clamped = 0;
    for (std::size_t i = 0; i < spec.n_gamma; ++i) {
        const double x = g.gamma_axis[i];
        for (std::size_t j = 0; j < spec.n_N; ++j) {
            const double y = g.N_axis[j];
            const double diag = 0.5 * (wp.density(x, y) + wm.density(x, y));
            g.values[i * spec.n_N + j] = 0.5 * (diag + eval_offdiag(s, x, y, &clamped).real());
        }
    }
    g.metadata = describe(p);
    g.metadata.emplace_back("mode", to_string(m));
    g.metadata.emplace_back("t_s", format_double(t));
    if (clamped > 0) g.metadata.emplace_back("clamped_points", std::to_string(clamped));
    return g;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = a;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

std::vector<double> marginal(const WignerGrid& g, Axis axis) {
    const std::size_t ng = g.gamma_axis.size(), nn = g.N_axis.size();
    std::vector<double> out;
    if (axis == Axis::gamma) {
        std::vector<double> row(nn);
        for (std::size_t i = 0; i < ng; ++i) {
            for (std::size_t j = 0; j < nn; ++j) row[j] = g.at(i, j);
            out.push_back(trapezoid(g.N_axis, row));
        }
    } else {
        std::vector<double> col(ng);
        for (std::size_t j = 0; j < nn; ++j) {
            for (std::size_t i = 0; i < ng; ++i) col[i] = g.at(i, j);
            out.push_back(trapezoid(g.gamma_axis, col));
        }
    }
    return out;
}

double grid_integral(const WignerGrid& g) { return trapezoid(g.gamma_axis, marginal(g, Axis::gamma)); }

}  // namespace ibc
