#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibc/coeffode.hpp"
#include "ibc/dephasing.hpp"
#include "ibc/observables.hpp"
#include "ibc/params.hpp"

namespace ibccli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TimeUnit { T0, ns };

struct TimeSpec {
    double value = 0.0;
    TimeUnit unit = TimeUnit::T0;

    double seconds(const ibc::SystemParams& p) const;
};

struct Range {
    double lo = 0.0, hi = 0.0;
    std::size_t n = 1;

    std::vector<double> values() const;
};

struct RunConfig {
    ibc::PhysicalInputs inputs = ibc::quantronium_inputs();
    double ej_scale = 1.0;  // multiplies E_J after loading
    std::vector<ibc::Mode> modes{ibc::Mode::irreversible};

    TimeSpec t_max{2.0, TimeUnit::T0};
    std::size_t samples = 401;
    TimeSpec t_snapshot{0.0, TimeUnit::T0};

    ibc::GridSpec grid;
    ibc::OdeTolerances tolerances;
    ibc::CircuitNoise circuit = ibc::quantronium_circuit();

    std::string output_dir = ".";
    std::string grid_format = "long";  // long | grid

    Range sweep_bias{0.5, 0.97, 5};
    Range sweep_duration_ns{0.05, 0.5, 4};
    std::size_t sweep_cap = 10000;

    std::string suite = "all";
    double classical_periods = 2.0;
    double classical_bias = 0.3;
};

// Applies one "key = value" assignment; `where` prefixes error messages.
void apply(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

// Reads a flat key=value file: '#' starts a comment, blank lines are ignored.
void load_file(RunConfig& cfg, const std::string& path);

// Default output directory: $IBCSIM_OUTPUT_DIR when set, otherwise ".".
std::string default_output_dir();

ibc::SystemParams resolve(const RunConfig& cfg);

// Resolved settings as key/value pairs for output headers.
std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg);

std::vector<std::string> known_keys();

}  // namespace ibccli
