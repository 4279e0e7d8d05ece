#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ibc {

namespace units {
inline constexpr double kBoltzmann = 1.380649e-23;       // J/K
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kPlanck = 6.62607015e-34;        // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);
}  // namespace units

enum class Branch { plus, minus };
enum class Mode { reversible, irreversible };

const char* to_string(Branch b);
const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

// Energies given in units of k_B * kelvin, as the experimental literature quotes them.
struct PhysicalInputs {
    double E_J = 0.0;
    double E_C = 0.0;
    double E_C0 = 0.0;
    double E_J0 = 0.0;
    std::optional<double> E_b_ratio;
    std::optional<double> I_bias;  // ampere
};

// hbar = 1 throughout: every energy below is an angular frequency in rad/s.
struct SystemParams {
    PhysicalInputs inputs;

    double E_J = 0.0;
    double E_C = 0.0;
    double E_C0 = 0.0;
    double E_J0 = 0.0;
    double E_b = 0.0;  // signed

    double nu = 0.0;
    double mu = 0.0;
    double lambda_plus = 0.0, lambda_minus = 0.0, lambda_cross = 0.0;
    double Gamma_plus = 0.0, Gamma_minus = 0.0, Gamma_cross = 0.0;
    double omega_plus = 0.0, omega_minus = 0.0, omega_cross = 0.0;
    double T0 = 0.0;  // seconds; +inf when mu == 0

    double lambda(Branch b) const { return b == Branch::plus ? lambda_plus : lambda_minus; }
    double Gamma(Branch b) const { return b == Branch::plus ? Gamma_plus : Gamma_minus; }
    double omega(Branch b) const { return b == Branch::plus ? omega_plus : omega_minus; }
};

double convert_energy(double kelvin);
double bias_energy_from_current(double ampere);  // rad/s

SystemParams build_system(const PhysicalInputs& in);

// Key/value echo of the inputs and every derived constant, 17 significant digits.
std::vector<std::pair<std::string, std::string>> describe(const SystemParams& p);
std::string format_double(double v);

// Same physical inputs with every energy multiplied by `s` (the bias ratio is kept).
PhysicalInputs scaled(const PhysicalInputs& in, double s);

// Quantronium parameter set used throughout the validation suite.
PhysicalInputs quantronium_inputs();

struct DcSquidInputs {
    double epsilon0 = 0.0;  // qubit splitting, k_B K
    double E_J0 = 0.0;
    double E_C0 = 0.0;
    double phi_x = 0.0;      // rad
    double delta_phi = 0.0;  // rad
    std::optional<double> E_b_ratio;  // relative to the bare E_J0
};

// Reduces the two-junction SQUID onto the single-junction readout form.
// Resonance mismatch is not fatal; a message is appended to `warnings` if given.
SystemParams map_dcsquid(const DcSquidInputs& in, std::vector<std::string>* warnings = nullptr);

}  // namespace ibc
