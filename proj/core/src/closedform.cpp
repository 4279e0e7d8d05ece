#include "ibc/closedform.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include "ibc/errors.hpp"

namespace ibc {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1(0.0, 1.0);

double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

double oscillation(const OscillatorMapping& m, double s) {
    const double w2 = m.omega * m.omega + s * 4.0 * m.omega * m.chi;
    if (!(w2 > 0.0)) {
        std::ostringstream os;
        os << "omega^2 " << (s > 0 ? "+" : "-") << " 4 omega chi <= 0: the effective well is inverted";
        throw RegimeError(os.str());
    }
    return std::sqrt(w2);
}

GaussMoments moments(const OscillatorMapping& m, double s, double t) {
    const double w = m.omega, chi = m.chi, eps = m.epsilon, l = m.lambda;
    const double O = oscillation(m, s);
    GaussMoments g;
    g.mean_gamma = std::sqrt(2.0 * l) * eps * (std::cos(t * O) - 1.0) / (w + s * 4.0 * chi);
    g.mean_N = -std::sqrt(2.0) * eps * std::sin(t * O) / std::sqrt(l * O * O);
    const double c2 = std::cos(2.0 * t * O);
    g.sigma = (w * w + s * 2.0 * chi * (2.0 * w + I1 * O * std::sin(2.0 * t * O))) /
              (l * w * (w + s * 2.0 * chi * (1.0 + c2)));
    g.var_gamma = l * (w + s * 2.0 * chi * (1.0 + c2)) / (2.0 * (w + s * 4.0 * chi));
    return g;
}

// Real part of the Schroedinger-picture growth rate of the log-amplitude of one branch.
double phase_rate(const OscillatorMapping& m, double s, double t) {
    const GaussMoments g = moments(m, s, t);
    const double Ec0 = 0.5 * m.omega * m.lambda;
    const cplx B = g.sigma * g.mean_gamma + I1 * g.mean_N;
    return (Ec0 * (B * B - g.sigma)).real();
}

// Boundary part of the branch phase. The -N gamma / 2 piece cancels the
// (i/2)(N+ gamma+ - N- gamma-) term of the moment assembly.
double phase_boundary(const GaussMoments& g) {
    return 0.5 * g.sigma.imag() * g.mean_gamma * g.mean_gamma - 0.5 * g.mean_N * g.mean_gamma;
}

CoeffState assemble(const OscillatorMapping& m, double t) {
    const GaussMoments gp = moments(m, 1.0, t);
    const GaussMoments gm = moments(m, -1.0, t);
    const cplx sp = gp.sigma, smc = std::conj(gm.sigma);
    const cplx S = sp + smc;
    if (std::abs(S) <= 1e-12 * (std::abs(sp) + std::abs(smc)))
        throw DegenerateError("sigma_+ + conj(sigma_-) vanishes");
    const double Np = gp.mean_N, Nm = gm.mean_N, yp = gp.mean_gamma, ym = gm.mean_gamma;
    const cplx X = I1 * Np + I1 * Nm + sp * yp - smc * ym;

    CoeffState c;
    c.a = X * (smc - sp) / S + I1 * Np - I1 * Nm + sp * yp + smc * ym;
    c.b = (2.0 * (Np + Nm) - 2.0 * I1 * sp * yp + 2.0 * I1 * smc * ym) / S;
    c.c = -sp / 2.0 - smc / 2.0 + (sp - smc) * (sp - smc) / (2.0 * S);
    c.d = (2.0 * I1 * smc - 2.0 * I1 * sp) / S;
    c.e = -2.0 / S;
    c.f = std::log(4.0 / (kPi * std::sqrt(S) * std::pow(gp.var_gamma * gm.var_gamma, 0.25))) +
          0.5 * I1 * (Np * yp - Nm * ym) - 0.5 * sp * yp * yp - 0.5 * smc * ym * ym + X * X / (2.0 * S);
    return c;
}

// Integral of (rate_+ - rate_-) over [t0, t1] on panels no wider than 1/16 of a period.
double phase_difference(const OscillatorMapping& m, double t0, double t1) {
    if (t1 <= t0) return 0.0;
    const double panel = 2.0 * kPi / m.omega / 16.0;
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / panel));
    const double h = (t1 - t0) / static_cast<double>(n);
    auto f = [&m](double s) { return phase_rate(m, 1.0, s) - phase_rate(m, -1.0, s); };
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = t0 + h * static_cast<double>(i);
        total += boost::math::quadrature::gauss<double, 20>::integrate(f, a, a + h);
    }
    return total;
}

}  // namespace

OscillatorMapping oscillator_mapping(const SystemParams& p) {
    return {p.omega_cross, p.E_J * p.lambda_cross / 16.0, -p.E_b * p.Gamma_cross, p.lambda_cross};
}

GaussMoments moments_reversible(const SystemParams& p, Branch b, double t) {
    return moments(oscillator_mapping(p), branch_sign(b), t);
}

CoeffState offdiag_uncorrected(const SystemParams& p, double t) { return assemble(oscillator_mapping(p), t); }

std::vector<CoeffState> offdiag_closedform_series(const SystemParams& p, const std::vector<double>& t_grid) {
    const OscillatorMapping m = oscillator_mapping(p);
    std::vector<CoeffState> out;
    out.reserve(t_grid.size());
    double prev = 0.0, accumulated = 0.0;
    for (double t : t_grid) {
        if (t < prev) throw ParameterError("time grid must be non-decreasing and start at t >= 0");
        accumulated += phase_difference(m, prev, t);
        prev = t;
        CoeffState c = assemble(m, t);
        c.d = -c.d;
        const double theta = accumulated + phase_boundary(moments(m, 1.0, t)) - phase_boundary(moments(m, -1.0, t));
        c.f += -std::log(4.0) + I1 * theta;
        out.push_back(c);
    }
    return out;
}

CoeffState offdiag_closedform(const SystemParams& p, double t) { return offdiag_closedform_series(p, {t}).front(); }

// ---------------------------------------------------------------------------

namespace {

struct BConst {
    double w, l, E, I, G;
    cplx k;
};

BConst bconst(const SystemParams& p, Mode m) {
    const DriveConstants d = make_drive_constants(p, m);
    return {d.omega, d.lambda, d.E_drive, d.I_damp, d.G, cplx(-d.I_damp, d.E_drive)};
}

using Series = std::array<cplx, 5>;

Series mul(const Series& x, const Series& y) {
    Series r{};
    for (std::size_t n = 0; n < r.size(); ++n)
        for (std::size_t j = 0; j <= n; ++j) r[n] += x[j] * y[n - j];
    return r;
}

Series add(const Series& x, const Series& y, cplx sy = 1.0) {
    Series r;
    for (std::size_t n = 0; n < r.size(); ++n) r[n] = x[n] + sy * y[n];
    return r;
}

}  // namespace

std::pair<cplx, cplx> tov_rates(const SystemParams& p, Mode m) {
    const BConst b = bconst(p, m);
    const cplx inner = std::sqrt(cplx(b.w * b.w - 4.0 * b.E * b.E, -4.0 * b.E * b.I));
    return {std::sqrt(-2.0 * b.w * b.w + 2.0 * b.w * inner), std::sqrt(-2.0 * b.w * b.w - 2.0 * b.w * inner)};
}

TovState tov_P(const SystemParams& p, Mode m, double t) {
    const BConst b = bconst(p, m);
    if (b.I == 0.0)
        throw SingularAmplitudeError(
            "closed-form amplitudes C1..C4 carry a 1/I factor and are undefined for I = 0; "
            "use the quartic integration instead");
    TovState s;
    std::tie(s.lambda1, s.lambda2) = tov_rates(p, m);
    const cplx l1 = s.lambda1, l2 = s.lambda2;
    const cplx base = 2.0 * b.I - I1 * b.E;
    const cplx tail = b.E * (b.E + 4.0 * I1 * b.I);
    const cplx den = 4.0 * b.I * (l2 * l2 - l1 * l1);
    s.c1 = l2 * l2 * (base + tail / (2.0 * l1)) / den;
    s.c2 = l2 * l2 * (base - tail / (2.0 * l1)) / den;
    s.c3 = -l1 * l1 * (base + tail / (2.0 * l2)) / den;
    s.c4 = -l1 * l1 * (base - tail / (2.0 * l2)) / den;
    s.P = s.c1 * std::exp(l1 * t) + s.c2 * std::exp(-l1 * t) + s.c3 * std::exp(l2 * t) + s.c4 * std::exp(-l2 * t);
    return s;
}

std::vector<PSample> tov_P_closed(const SystemParams& p, Mode m, const std::vector<double>& t_grid) {
    std::vector<PSample> out;
    for (double t : t_grid) {
        const TovState s = tov_P(p, m, t);
        const cplx e1 = s.c1 * std::exp(s.lambda1 * t), e2 = s.c2 * std::exp(-s.lambda1 * t);
        const cplx e3 = s.c3 * std::exp(s.lambda2 * t), e4 = s.c4 * std::exp(-s.lambda2 * t);
        PSample q;
        q.t = t;
        q.P = s.P;
        q.dP = s.lambda1 * (e1 - e2) + s.lambda2 * (e3 - e4);
        q.d2P = s.lambda1 * s.lambda1 * (e1 + e2) + s.lambda2 * s.lambda2 * (e3 + e4);
        out.push_back(q);
    }
    return out;
}

std::array<cplx, 4> tov_initial_jet(const SystemParams& p, Mode m) {
    const BConst b = bconst(p, m);
    if (std::abs(b.k) == 0.0) throw DegenerateError("-I + iE vanishes: P is undefined");
    const CoeffState s0 = initial_coeffs(p);
    Series z{}, zb{}, u{};
    z[0] = (s0.d + I1 * (s0.c / b.l - b.l * s0.e)) / (4.0 * I1);
    zb[0] = (s0.d - I1 * (s0.c / b.l - b.l * s0.e)) / (4.0 * I1);
    u[0] = (s0.c / b.l + b.l * s0.e) / 4.0;

    // Power-series recurrence: the n-th coefficient of each right-hand side
    // only involves coefficients up to order n.
    for (std::size_t n = 0; n + 1 < z.size(); ++n) {
        const Series zmu = add(z, u, -1.0), zbpu = add(zb, u);
        const Series zz = mul(zmu, zmu), bb = mul(zbpu, zbpu), zu = mul(zmu, zbpu);
        const cplx c0 = n == 0 ? cplx(0.0, 2.0 * b.E) : cplx(0.0);
        const cplx dz = 2.0 * I1 * b.w * z[n] - b.k * zz[n] / 2.0 - c0;
        const cplx dzb = -2.0 * I1 * b.w * zb[n] + b.k * bb[n] / 2.0 + c0;
        const cplx du = -b.k * zu[n] / 2.0 - c0;
        const double inv = 1.0 / static_cast<double>(n + 1);
        z[n + 1] = dz * inv;
        zb[n + 1] = dzb * inv;
        u[n + 1] = du * inv;
    }
    const Series Q = add(mul(z, zb), mul(u, u));
    const cplx r = 4.0 * I1 * b.E / b.k;
    Series num = Q, den = Q;
    num[0] += r;
    den[0] -= r;
    Series P{};
    for (std::size_t n = 0; n < P.size(); ++n) {
        cplx acc = num[n];
        for (std::size_t j = 1; j <= n; ++j) acc -= den[j] * P[n - j];
        P[n] = acc / den[0];
    }
    return {P[0], P[1], 2.0 * P[2], 6.0 * P[3]};
}

namespace {

namespace odeint = boost::numeric::odeint;

template <std::size_t Dim, class Rhs, class Emit>
void dense_integrate(std::array<double, Dim> x, const std::vector<double>& t_grid, double rate,
                     const OdeTolerances& tol, Rhs rhs, Emit emit) {
    using State = std::array<double, Dim>;
    if (t_grid.empty()) return;
    if (t_grid.front() != 0.0) throw ParameterError("time grid must start at t = 0");
    auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, 0.0, 1e-3 / rate);
    emit(0.0, x);
    State y;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (t_grid[i] < t_grid[i - 1]) throw ParameterError("time grid must be non-decreasing");
        while (stepper.current_time() < t_grid[i]) stepper.do_step(rhs);
        stepper.calc_state(t_grid[i], y);
        emit(t_grid[i], y);
    }
}

// Complex values packed as consecutive (re, im) pairs.
template <std::size_t Dim>
cplx get(const std::array<double, Dim>& x, std::size_t i) {
    return {x[2 * i], x[2 * i + 1]};
}

template <std::size_t Dim>
void put(std::array<double, Dim>& x, std::size_t i, cplx v) {
    x[2 * i] = v.real();
    x[2 * i + 1] = v.imag();
}

}  // namespace

std::vector<PSample> tov_P_quartic(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                         const OdeTolerances& tol) {
    return tov_P_quartic(p, m, t_grid, tov_initial_jet(p, m), tol);
}

std::vector<PSample> tov_P_quartic(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                         const std::array<cplx, 4>& jet, const OdeTolerances& tol) {
    const BConst b = bconst(p, m);
    std::array<double, 8> x{};
    for (std::size_t i = 0; i < 4; ++i) put(x, i, jet[i]);
    const cplx coupling = 16.0 * b.w * b.w * I1 * b.E * b.k;

    auto rhs = [&](const std::array<double, 8>& s, std::array<double, 8>& ds, double) {
        put(ds, 0, get(s, 1));
        put(ds, 1, get(s, 2));
        put(ds, 2, get(s, 3));
        put(ds, 3, -4.0 * b.w * b.w * get(s, 2) + coupling * get(s, 0));
    };
    std::vector<PSample> out;
    dense_integrate(x, t_grid, b.w + std::abs(b.k), tol, rhs, [&out](double t, const std::array<double, 8>& s) {
        out.push_back({t, get(s, 0), get(s, 1), get(s, 2)});
    });
    return out;
}

std::vector<CdeSample> tov_cde(const std::vector<PSample>& series, const SystemParams& p, Mode m) {
    const BConst b = bconst(p, m);
    std::vector<CdeSample> out;
    for (const PSample& q : series) {
        const cplx one_m = 1.0 - q.P;
        if (std::abs(one_m) < 1e-10) {
            std::ostringstream os;
            os << "1 - P vanishes at t = " << q.t << " s";
            throw PoleError(os.str(), q.t);
        }
        CdeSample s;
        s.c = (2.0 * b.w * b.w * q.dP + q.d2P) / (4.0 * b.l * b.w * b.w * b.k * one_m);
        s.d = -q.d2P / (2.0 * b.w * b.k * one_m);
        s.e = b.l * q.dP / (2.0 * b.k * one_m);
        out.push_back(s);
    }
    return out;
}

std::vector<AbSample> tov_y(const SystemParams& p, Mode m, const std::vector<double>& t_grid, PSource source,
                                  const OdeTolerances& tol) {
    const BConst b = bconst(p, m);
    const std::array<cplx, 4> jet = tov_initial_jet(p, m);
    const cplx coupling = 16.0 * b.w * b.w * I1 * b.E * b.k;
    const bool closed = source == PSource::closed_form;
    if (closed) tov_P(p, m, 0.0);  // refuses I = 0 up front

    auto p_at = [&](double t, const std::array<double, 12>& s) -> std::array<cplx, 2> {
        if (closed) {
            const PSample q = tov_P_closed(p, m, {t}).front();
            return {q.P, q.dP};
        }
        return {get(s, 0), get(s, 1)};
    };
    auto check_pole = [](cplx one_m, double t) {
        if (std::abs(one_m) < 1e-10) throw PoleError("1 - P vanishes during the y integration", t);
    };

    // State: P, P', P'', P''' (used only for the quartic source), y, y'.
    std::array<double, 12> x{};
    for (std::size_t i = 0; i < 4; ++i) put(x, i, jet[i]);
    const auto p0 = p_at(0.0, x);
    check_pole(1.0 - p0[0], 0.0);
    const cplx root0 = std::sqrt(1.0 - p0[0]);
    const cplx y0 = -8.0 * I1 * b.G * root0 / b.k;
    put(x, 4, y0);
    put(x, 5, y0 * p0[1] / (2.0 * (1.0 - p0[0])));

    auto rhs = [&](const std::array<double, 12>& s, std::array<double, 12>& ds, double t) {
        if (closed) {
            ds.fill(0.0);
        } else {
            put(ds, 0, get(s, 1));
            put(ds, 1, get(s, 2));
            put(ds, 2, get(s, 3));
            put(ds, 3, -4.0 * b.w * b.w * get(s, 2) + coupling * get(s, 0));
        }
        const auto pp = p_at(t, s);
        const cplx one_m = 1.0 - pp[0];
        check_pole(one_m, t);
        const cplx ratio = pp[1] / one_m;
        put(ds, 4, get(s, 5));
        put(ds, 5, -(1.0 - 0.5 * ratio * ratio) * get(s, 4) - 4.0 * I1 * b.G * std::sqrt(one_m) / b.k);
    };

    std::vector<AbSample> out;
    dense_integrate(x, t_grid, b.w + std::abs(b.k), tol, rhs, [&](double t, const std::array<double, 12>& s) {
        const auto pp = p_at(t, s);
        const cplx one_m = 1.0 - pp[0];
        check_pole(one_m, t);
        const cplx root = std::sqrt(one_m);
        const cplx y = get(s, 4), dy = get(s, 5);
        AbSample ab;
        ab.a = I1 / (2.0 * one_m * std::sqrt(2.0 * b.l)) * (dy * root - y * pp[1] / (2.0 * root));
        ab.b = std::sqrt(b.l / 2.0) * (-I1 * y / (2.0 * root) + 4.0 * b.G / b.k);
        out.push_back(ab);
    });
    return out;
}

}  // namespace ibc
