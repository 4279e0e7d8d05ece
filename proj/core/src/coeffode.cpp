#include "ibc/coeffode.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "ibc/errors.hpp"

namespace ibc {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 12>;

std::array<double, 12> CoeffState::pack() const {
    return {a.real(), a.imag(), b.real(), b.imag(), c.real(), c.imag(),
            d.real(), d.imag(), e.real(), e.imag(), f.real(), f.imag()};
}

CoeffState CoeffState::unpack(const std::array<double, 12>& x) {
    return {{x[0], x[1]}, {x[2], x[3]}, {x[4], x[5]}, {x[6], x[7]}, {x[8], x[9]}, {x[10], x[11]}};
}

DriveConstants make_drive_constants(const SystemParams& p, Mode m) {
    DriveConstants k;
    k.G = -p.E_b;
    k.E_drive = p.E_J / 4.0;
    k.I_damp = m == Mode::irreversible ? -2.0 * std::abs(p.E_b) : 0.0;
    k.omega = p.omega_cross;
    k.lambda = p.lambda_cross;
    return k;
}

CoeffState initial_coeffs(const SystemParams& p) {
    const double l = p.lambda_cross;
    return {0.0, 0.0, -1.0 / l, 0.0, -l, -std::log(std::numbers::pi)};
}

CoeffState derivative(const CoeffState& s, const DriveConstants& k) {
    const cplx kk(-k.I_damp, k.E_drive);
    const cplx iE(0.0, k.E_drive);
    const double w = k.omega, l = k.lambda, G = k.G;
    CoeffState r;
    r.a = (w / l) * s.b + G * s.d + 0.5 * kk * s.b * s.d;
    r.b = -l * w * s.a + 2.0 * G * s.e + kk * s.e * s.b;
    r.c = (w / l) * s.d - iE + 0.25 * kk * s.d * s.d;
    r.d = -2.0 * l * w * s.c + (2.0 * w / l) * s.e + kk * s.e * s.d;
    r.e = -l * w * s.d + kk * s.e * s.e;
    r.f = G * s.b + 0.25 * kk * (2.0 * s.e + s.b * s.b);
    return r;
}

namespace {

void check_state(const State& x, double t) {
    for (double v : x) {
        if (!std::isfinite(v)) throw IntegrabilityError("coefficient diverged (non-finite value)", t);
    }
    if (x[4] >= 0.0 || x[8] >= 0.0) {
        std::ostringstream os;
        os << "W_x lost integrability at t = " << t << " s (Re c = " << x[4] << ", Re e = " << x[8] << ")";
        throw IntegrabilityError(os.str(), t);
    }
}

}  // namespace

std::vector<CoeffState> integrate(const SystemParams& p, const DriveConstants& k, const std::vector<double>& t_grid,
                                  const OdeTolerances& tol) {
    if (t_grid.empty()) return {};
    if (t_grid.front() != 0.0) throw ParameterError("coefficient integration must start at t = 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] < t_grid[i - 1]) throw ParameterError("time grid must be non-decreasing");

    auto rhs = [&k](const State& x, State& dx, double) { dx = derivative(CoeffState::unpack(x), k).pack(); };

    std::vector<CoeffState> out;
    out.reserve(t_grid.size());
    State x = initial_coeffs(p).pack();
    out.push_back(CoeffState::unpack(x));
    if (t_grid.size() == 1) return out;

    const double rate = k.omega + std::abs(k.I_damp) + std::abs(k.E_drive) + std::abs(k.G);
    auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, 0.0, 1e-3 / rate);

    State y;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double target = t_grid[i];
        while (stepper.current_time() < target) {
            stepper.do_step(rhs);
            check_state(stepper.current_state(), stepper.current_time());
        }
        if (stepper.current_time() == target)
            y = stepper.current_state();
        else
            stepper.calc_state(target, y);
        check_state(y, target);
        out.push_back(CoeffState::unpack(y));
    }
    return out;
}

std::vector<CoeffState> integrate(const SystemParams& p, Mode m, const std::vector<double>& t_grid,
                                  const OdeTolerances& tol) {
    return integrate(p, make_drive_constants(p, m), t_grid, tol);
}

CoeffState integrate_to(const SystemParams& p, Mode m, double t, const OdeTolerances& tol) {
    return integrate(p, m, {0.0, t}, tol).back();
}

}  // namespace ibc
