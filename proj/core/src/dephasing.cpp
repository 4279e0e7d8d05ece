#include "ibc/dephasing.hpp"

#include <cmath>
#include <numbers>

#include "ibc/errors.hpp"
#include "ibc/params.hpp"

namespace ibc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPhaseScale = units::kFluxQuantum / (2.0 * kPi * units::kHbar);
}  // namespace

CircuitNoise quantronium_circuit() { return {50.0, 3500.0, 4.2, 200e6}; }

// T = 0 and zero bandwidth are accepted: they are the natural limits of the formulas.
void check(const CircuitNoise& c) {
    if (!(c.R1 > 0.0) || !(c.R2 > 0.0)) throw ParameterError("R1 and R2 must be positive");
    if (!(c.T >= 0.0)) throw ParameterError("temperature must be non-negative");
    if (!(c.bandwidth >= 0.0)) throw ParameterError("bandwidth must be non-negative");
}

double current_noise_spectrum(const CircuitNoise& c) {
    check(c);
    return std::sqrt(4.0 * c.R1 * units::kBoltzmann * c.T) / c.R2;
}

double gamma_noise(const CircuitNoise& c) {
    const double x = current_noise_spectrum(c) * kPhaseScale;
    return x * x;
}

double i_rms(const CircuitNoise& c) {
    check(c);
    return std::sqrt(4.0 * c.R1 * units::kBoltzmann * c.T * c.bandwidth) / c.R2;
}

double mean_abs_current(const CircuitNoise& c) { return std::sqrt(2.0 / kPi) * i_rms(c); }

double gamma_deph(const CircuitNoise& c) {
    return mean_abs_current(c) * units::kFluxQuantum / (4.0 * kPi * units::kHbar);
}

double rate_ratio_identity(const CircuitNoise& c) {
    const double S = current_noise_spectrum(c);
    return S * S * units::kFluxQuantum * std::sqrt(8.0 * kPi * kPi * kPi) /
           (4.0 * kPi * kPi * units::kHbar * i_rms(c));
}

}  // namespace ibc
