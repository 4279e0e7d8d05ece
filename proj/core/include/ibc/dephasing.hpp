#pragma once

namespace ibc {

struct CircuitNoise {
    double R1 = 0.0;         // ohm, source output resistance
    double R2 = 0.0;         // ohm, effective input resistance
    double T = 0.0;          // kelvin
    double bandwidth = 0.0;  // Hz
};

// R1 = 50 ohm parallel resistor at a 4.2 K helium bath, R2 = 3.5 kohm, 200 MHz.
CircuitNoise quantronium_circuit();

void check(const CircuitNoise& c);

double current_noise_spectrum(const CircuitNoise& c);  // A / sqrt(Hz)
double gamma_noise(const CircuitNoise& c);             // 1/s
double i_rms(const CircuitNoise& c);                   // A
double mean_abs_current(const CircuitNoise& c);        // A, Gaussian <|I|>
double gamma_deph(const CircuitNoise& c);              // 1/s

// Closed-form ratio gamma_noise / gamma_deph written directly in the circuit inputs.
double rate_ratio_identity(const CircuitNoise& c);

}  // namespace ibc
