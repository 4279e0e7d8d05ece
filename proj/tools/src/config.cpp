#include "ibcsim_cli/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "ibc/errors.hpp"

namespace ibccli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& where) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) throw ConfigError(where + ": expected a number, got '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& v, const std::string& where) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError(where + ": expected a non-negative integer, got '" + v + "'");
    return out;
}

// "2.5" (defaults to T0), "2.5T0" or "16.932ns".
TimeSpec to_time(const std::string& v, const std::string& where) {
    TimeSpec t;
    std::string num = v;
    if (v.size() > 2 && v.compare(v.size() - 2, 2, "ns") == 0) {
        t.unit = TimeUnit::ns;
        num = v.substr(0, v.size() - 2);
    } else if (v.size() > 2 && v.compare(v.size() - 2, 2, "T0") == 0) {
        num = v.substr(0, v.size() - 2);
    }
    t.value = to_double(trim(num), where);
    if (t.value < 0.0) throw ConfigError(where + ": time must be non-negative");
    return t;
}

// "lo:hi:n"
Range to_range(const std::string& v, const std::string& where) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3) throw ConfigError(where + ": expected lo:hi:n, got '" + v + "'");
    Range r{to_double(parts[0], where), to_double(parts[1], where), to_count(parts[2], where)};
    if (r.n == 0) throw ConfigError(where + ": range needs at least one point");
    if (r.n == 1 && r.lo != r.hi) throw ConfigError(where + ": a single-point range needs lo == hi");
    return r;
}

std::vector<ibc::Mode> to_modes(const std::string& v, const std::string& where) {
    if (v == "both") return {ibc::Mode::reversible, ibc::Mode::irreversible};
    try {
        return {ibc::parse_mode(v)};
    } catch (const ibc::Error&) {
        throw ConfigError(where + ": mode must be reversible, irreversible or both");
    }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"E_J", [](RunConfig& c, const std::string& v, const std::string& w) { c.inputs.E_J = to_double(v, w); }},
        {"E_C", [](RunConfig& c, const std::string& v, const std::string& w) { c.inputs.E_C = to_double(v, w); }},
        {"E_C0", [](RunConfig& c, const std::string& v, const std::string& w) { c.inputs.E_C0 = to_double(v, w); }},
        {"E_J0", [](RunConfig& c, const std::string& v, const std::string& w) { c.inputs.E_J0 = to_double(v, w); }},
        {"E_b_ratio",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (v == "none")
                 c.inputs.E_b_ratio.reset();
             else
                 c.inputs.E_b_ratio = to_double(v, w);
         }},
        {"I_bias",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (v == "none")
                 c.inputs.I_bias.reset();
             else
                 c.inputs.I_bias = to_double(v, w);
         }},
        {"E_J_scale", [](RunConfig& c, const std::string& v, const std::string& w) { c.ej_scale = to_double(v, w); }},
        {"mode", [](RunConfig& c, const std::string& v, const std::string& w) { c.modes = to_modes(v, w); }},
        {"t_max", [](RunConfig& c, const std::string& v, const std::string& w) { c.t_max = to_time(v, w); }},
        {"samples", [](RunConfig& c, const std::string& v, const std::string& w) { c.samples = to_count(v, w); }},
        {"t", [](RunConfig& c, const std::string& v, const std::string& w) { c.t_snapshot = to_time(v, w); }},
        {"n_gamma", [](RunConfig& c, const std::string& v, const std::string& w) { c.grid.n_gamma = to_count(v, w); }},
        {"n_N", [](RunConfig& c, const std::string& v, const std::string& w) { c.grid.n_N = to_count(v, w); }},
        {"grid_bounds",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (v == "auto") {
                 c.grid.bounds.reset();
                 return;
             }
             std::stringstream ss(v);
             std::string item;
             std::vector<double> x;
             while (std::getline(ss, item, ',')) x.push_back(to_double(trim(item), w));
             if (x.size() != 4) throw ConfigError(w + ": expected gamma_min,gamma_max,N_min,N_max or auto");
             c.grid.bounds = ibc::GridBounds{x[0], x[1], x[2], x[3]};
         }},
        {"coverage_sigmas",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.grid.coverage_sigmas = to_double(v, w); }},
        {"rtol", [](RunConfig& c, const std::string& v, const std::string& w) { c.tolerances.rel = to_double(v, w); }},
        {"atol", [](RunConfig& c, const std::string& v, const std::string& w) { c.tolerances.abs = to_double(v, w); }},
        {"R1", [](RunConfig& c, const std::string& v, const std::string& w) { c.circuit.R1 = to_double(v, w); }},
        {"R2", [](RunConfig& c, const std::string& v, const std::string& w) { c.circuit.R2 = to_double(v, w); }},
        {"T", [](RunConfig& c, const std::string& v, const std::string& w) { c.circuit.T = to_double(v, w); }},
        {"bandwidth",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.circuit.bandwidth = to_double(v, w); }},
        {"output_dir", [](RunConfig& c, const std::string& v, const std::string&) { c.output_dir = v; }},
        {"grid_format",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (v != "long" && v != "grid") throw ConfigError(w + ": grid_format must be long or grid");
             c.grid_format = v;
         }},
        {"sweep.E_b_ratio",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.sweep_bias = to_range(v, w); }},
        {"sweep.duration_ns",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.sweep_duration_ns = to_range(v, w); }},
        {"sweep.cap", [](RunConfig& c, const std::string& v, const std::string& w) { c.sweep_cap = to_count(v, w); }},
        {"suite",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             if (v != "oracle" && v != "classical-limit" && v != "pde-residual" && v != "all")
                 throw ConfigError(w + ": suite must be oracle, classical-limit, pde-residual or all");
             c.suite = v;
         }},
        {"classical.periods",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.classical_periods = to_double(v, w); }},
        {"classical.bias_ratio",
         [](RunConfig& c, const std::string& v, const std::string& w) { c.classical_bias = to_double(v, w); }},
    };
    return table;
}

std::string time_text(const TimeSpec& t) {
    return ibc::format_double(t.value) + (t.unit == TimeUnit::ns ? "ns" : "T0");
}

std::string range_text(const Range& r) {
    return ibc::format_double(r.lo) + ":" + ibc::format_double(r.hi) + ":" + std::to_string(r.n);
}

}  // namespace

double TimeSpec::seconds(const ibc::SystemParams& p) const {
    if (unit == TimeUnit::ns) return value * 1e-9;
    if (!std::isfinite(p.T0)) throw ConfigError("times in units of T0 need E_J > 0 (T0 is infinite)");
    return value * p.T0;
}

std::vector<double> Range::values() const { return ibc::linspace(lo, hi, n); }

void apply(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    it->second(cfg, value, where + " (" + key + ")");
}

void load_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        apply(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
}

std::string default_output_dir() {
    const char* env = std::getenv("IBCSIM_OUTPUT_DIR");
    return env && *env ? env : ".";
}

ibc::SystemParams resolve(const RunConfig& cfg) {
    ibc::PhysicalInputs in = cfg.inputs;
    in.E_J *= cfg.ej_scale;
    return ibc::build_system(in);
}

std::vector<std::pair<std::string, std::string>> echo(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> m;
    std::string modes;
    for (ibc::Mode md : cfg.modes) modes += (modes.empty() ? "" : "+") + std::string(ibc::to_string(md));
    m.emplace_back("E_J_scale", ibc::format_double(cfg.ej_scale));
    m.emplace_back("modes", modes);
    m.emplace_back("t_max", time_text(cfg.t_max));
    m.emplace_back("samples", std::to_string(cfg.samples));
    m.emplace_back("t", time_text(cfg.t_snapshot));
    m.emplace_back("n_gamma", std::to_string(cfg.grid.n_gamma));
    m.emplace_back("n_N", std::to_string(cfg.grid.n_N));
    if (cfg.grid.bounds) {
        const ibc::GridBounds& b = *cfg.grid.bounds;
        m.emplace_back("grid_bounds", ibc::format_double(b.gamma_min) + "," + ibc::format_double(b.gamma_max) + "," +
                                          ibc::format_double(b.N_min) + "," + ibc::format_double(b.N_max));
    } else {
        m.emplace_back("grid_bounds", "auto");
    }
    m.emplace_back("coverage_sigmas", ibc::format_double(cfg.grid.coverage_sigmas));
    m.emplace_back("grid_format", cfg.grid_format);
    m.emplace_back("rtol", ibc::format_double(cfg.tolerances.rel));
    m.emplace_back("atol", ibc::format_double(cfg.tolerances.abs));
    m.emplace_back("sweep.E_b_ratio", range_text(cfg.sweep_bias));
    m.emplace_back("sweep.duration_ns", range_text(cfg.sweep_duration_ns));
    m.emplace_back("sweep.cap", std::to_string(cfg.sweep_cap));
    m.emplace_back("I_bias", cfg.inputs.I_bias ? ibc::format_double(*cfg.inputs.I_bias) : "none");
    m.emplace_back("R1", ibc::format_double(cfg.circuit.R1));
    m.emplace_back("R2", ibc::format_double(cfg.circuit.R2));
    m.emplace_back("T", ibc::format_double(cfg.circuit.T));
    m.emplace_back("bandwidth", ibc::format_double(cfg.circuit.bandwidth));
    m.emplace_back("suite", cfg.suite);
    m.emplace_back("classical.periods", ibc::format_double(cfg.classical_periods));
    m.emplace_back("classical.bias_ratio", ibc::format_double(cfg.classical_bias));
    return m;
}

std::vector<std::string> known_keys() {
    std::vector<std::string> k;
    for (const auto& [key, _] : setters()) k.push_back(key);
    return k;
}

}  // namespace ibccli
