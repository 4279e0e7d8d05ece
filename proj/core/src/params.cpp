#include "ibc/params.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "ibc/errors.hpp"

namespace ibc {

const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

const char* to_string(Mode m) { return m == Mode::reversible ? "reversible" : "irreversible"; }

Mode parse_mode(const std::string& s) {
    if (s == "reversible") return Mode::reversible;
    if (s == "irreversible") return Mode::irreversible;
    throw ParameterError("unknown mode '" + s + "' (expected reversible or irreversible)");
}

double convert_energy(double kelvin) { return kelvin * (units::kBoltzmann / units::kHbar); }

double bias_energy_from_current(double ampere) {
    return ampere * units::kFluxQuantum / (2.0 * std::numbers::pi) / units::kHbar;
}

SystemParams build_system(const PhysicalInputs& in) {
    if (!std::isfinite(in.E_J0) || in.E_J0 <= 0.0) throw ParameterError("E_J0 must be positive");
    if (!std::isfinite(in.E_C0) || in.E_C0 <= 0.0) throw ParameterError("E_C0 must be positive");
    if (!std::isfinite(in.E_J) || in.E_J < 0.0) throw ParameterError("E_J must be non-negative");

    SystemParams p;
    p.inputs = in;
    p.E_J = convert_energy(in.E_J);
    p.E_C = convert_energy(in.E_C);
    p.E_C0 = convert_energy(in.E_C0);
    p.E_J0 = convert_energy(in.E_J0);

    if (in.I_bias) {
        const double from_current = bias_energy_from_current(*in.I_bias);
        if (in.E_b_ratio) {
            const double from_ratio = *in.E_b_ratio * p.E_J0;
            const double scale = std::max(std::abs(from_ratio), std::abs(from_current));
            if (scale > 0.0 && std::abs(from_ratio - from_current) > 0.005 * scale) {
                std::ostringstream os;
                os << "I_bias and E_b_ratio disagree: I_bias gives E_b/E_J0 = "
                   << from_current / p.E_J0 << ", E_b_ratio = " << *in.E_b_ratio;
                throw ParameterError(os.str());
            }
        }
        p.E_b = from_current;
    } else if (in.E_b_ratio) {
        p.E_b = *in.E_b_ratio * p.E_J0;
    }

    p.nu = in.E_C0 / in.E_J0;
    p.mu = in.E_J / in.E_J0;
    if (p.mu >= 4.0) throw ParameterError("E_J/E_J0 must be below 4 (lambda_minus undefined)");

    p.lambda_plus = std::sqrt(2.0 * p.nu / (1.0 + p.mu / 4.0));
    p.lambda_minus = std::sqrt(2.0 * p.nu / (1.0 - p.mu / 4.0));
    p.lambda_cross = std::sqrt(2.0 * p.nu);
    p.Gamma_plus = std::sqrt(p.lambda_plus / 2.0);
    p.Gamma_minus = std::sqrt(p.lambda_minus / 2.0);
    p.Gamma_cross = std::sqrt(p.lambda_cross / 2.0);

    const double w2 = 2.0 * p.E_C0 * p.E_J0;
    p.omega_plus = std::sqrt(w2 * (1.0 + p.mu / 4.0));
    p.omega_minus = std::sqrt(w2 * (1.0 - p.mu / 4.0));
    p.omega_cross = std::sqrt(w2);

    const double split = p.omega_plus - p.omega_minus;
    p.T0 = split > 0.0 ? std::numbers::pi / split : std::numeric_limits<double>::infinity();
    return p;
}

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::vector<std::pair<std::string, std::string>> describe(const SystemParams& p) {
    std::vector<std::pair<std::string, std::string>> m;
    auto put = [&m](const char* k, double v) { m.emplace_back(k, format_double(v)); };
    put("E_J_K", p.inputs.E_J);
    put("E_C_K", p.inputs.E_C);
    put("E_C0_K", p.inputs.E_C0);
    put("E_J0_K", p.inputs.E_J0);
    if (p.inputs.E_b_ratio) put("E_b_ratio", *p.inputs.E_b_ratio);
    if (p.inputs.I_bias) put("I_bias_A", *p.inputs.I_bias);
    put("E_b_rad_s", p.E_b);
    put("nu", p.nu);
    put("mu", p.mu);
    put("lambda_plus", p.lambda_plus);
    put("lambda_minus", p.lambda_minus);
    put("lambda_cross", p.lambda_cross);
    put("omega_plus_rad_s", p.omega_plus);
    put("omega_minus_rad_s", p.omega_minus);
    put("omega_cross_rad_s", p.omega_cross);
    put("T0_s", p.T0);
    return m;
}

PhysicalInputs scaled(const PhysicalInputs& in, double s) {
    PhysicalInputs out = in;
    out.E_J *= s;
    out.E_C *= s;
    out.E_C0 *= s;
    out.E_J0 *= s;
    if (out.I_bias) *out.I_bias *= s;
    return out;
}

PhysicalInputs quantronium_inputs() {
    PhysicalInputs in;
    in.E_J = 0.86;
    in.E_C = 0.68;
    in.E_C0 = 0.0037;
    in.E_J0 = 18.4;
    in.E_b_ratio = 0.97;
    return in;
}

SystemParams map_dcsquid(const DcSquidInputs& in, std::vector<std::string>* warnings) {
    const double c = std::cos(in.phi_x);
    const double s = std::sin(in.phi_x);
    if (c <= 0.0) throw ParameterError("cos(phi_x) <= 0: the effective well is inverted");

    const double coupling = in.E_J0 * in.delta_phi * s;
    if (warnings) {
        const double scale = std::max(std::abs(in.epsilon0 / 2.0), std::abs(coupling));
        if (scale > 0.0 && std::abs(in.epsilon0 / 2.0 - coupling) > 0.01 * scale) {
            std::ostringstream os;
            os << "resonance condition violated: epsilon0/2 = " << in.epsilon0 / 2.0
               << " vs E_J0*delta_phi*sin(phi_x) = " << coupling;
            warnings->push_back(os.str());
        }
    }

    PhysicalInputs reduced;
    reduced.E_J = 4.0 * coupling;
    reduced.E_J0 = in.E_J0 * c;
    reduced.E_C0 = in.E_C0;
    if (in.E_b_ratio) reduced.E_b_ratio = *in.E_b_ratio / c;
    return build_system(reduced);
}

}  // namespace ibc
