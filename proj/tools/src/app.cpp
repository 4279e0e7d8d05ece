#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <thread>

#include "ibc/errors.hpp"
#include "ibcsim_cli/commands.hpp"

namespace ibccli {

namespace {

// Options shared by every subcommand. The config file is applied first, then
// the named flags, then --set pairs in order, so the last writer wins.
struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string output_dir;
    bool deterministic = false;
    unsigned jobs = 0;
};

struct Named {
    std::vector<std::pair<std::string, std::string>> pairs;
};

void add_named(CLI::App* sub, Named& named, const std::string& flag, const std::string& key,
               const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&named, key](const std::string& v) { named.pairs.emplace_back(key, v); }, help);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Irreversible bias-current readout simulator"};
    app.set_version_flag("--version", std::string("ibcsim ") + version());
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    Named named;
    app.add_option("--config", common.config_path, "key = value configuration file");
    app.add_option("--set", common.sets, "override one setting, key=value (repeatable)");
    app.add_option("--output-dir", common.output_dir, "directory for CSV output");
    app.add_flag("--deterministic", common.deterministic, "omit timestamps from output headers");
    app.add_option("--jobs", common.jobs, "worker threads for sweeps (default: hardware concurrency)");

    auto* bloch = app.add_subcommand("bloch", "Bloch-vector length against time");
    auto* wigner = app.add_subcommand("wigner", "phase-space snapshot W_s(gamma, N)");
    auto* coeffs = app.add_subcommand("coeffs", "raw exponent coefficients a..f against time");
    auto* deph = app.add_subcommand("dephasing", "noise and dephasing rates of the bias circuit");
    auto* sweep = app.add_subcommand("sweep", "bias ratio x pulse duration grid");
    auto* validate = app.add_subcommand("validate", "numerical cross-checks");

    for (auto* sub : {bloch, wigner, coeffs}) add_named(sub, named, "--mode", "mode", "reversible|irreversible|both");
    for (auto* sub : {bloch, coeffs}) {
        add_named(sub, named, "--t-max", "t_max", "end time, e.g. 2T0 or 10ns");
        add_named(sub, named, "--samples", "samples", "number of time samples");
    }
    add_named(wigner, named, "--t", "t", "snapshot time, e.g. 1T0 or 16.932ns");
    add_named(wigner, named, "--format", "grid_format", "long|grid");
    add_named(wigner, named, "--n-gamma", "n_gamma", "grid points along gamma");
    add_named(wigner, named, "--n-N", "n_N", "grid points along N");
    add_named(deph, named, "--R1", "R1", "ohm");
    add_named(deph, named, "--R2", "R2", "ohm");
    add_named(deph, named, "--T", "T", "kelvin");
    add_named(deph, named, "--bandwidth", "bandwidth", "Hz");
    add_named(sweep, named, "--bias", "sweep.E_b_ratio", "lo:hi:n");
    add_named(sweep, named, "--duration", "sweep.duration_ns", "lo:hi:n in ns");
    add_named(sweep, named, "--cap", "sweep.cap", "maximum number of grid points");
    validate->add_option_function<std::string>(
        "suite", [&named](const std::string& v) { named.pairs.emplace_back("suite", v); },
        "oracle|classical-limit|pde-residual|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    Context ctx;
    ctx.out = &out;
    ctx.err = &err;
    ctx.deterministic = common.deterministic;
    ctx.jobs = common.jobs ? common.jobs : std::max(1u, std::thread::hardware_concurrency());
    try {
        ctx.cfg.output_dir = default_output_dir();
        if (!common.config_path.empty()) load_file(ctx.cfg, common.config_path);
        if (!common.output_dir.empty()) ctx.cfg.output_dir = common.output_dir;
        for (const auto& [k, v] : named.pairs) apply(ctx.cfg, k, v, "--" + k);
        for (const std::string& s : common.sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set " + s + ": expected key=value");
            apply(ctx.cfg, s.substr(0, eq), s.substr(eq + 1), "--set " + s.substr(0, eq));
        }

        if (bloch->parsed()) return cmd_bloch(ctx);
        if (wigner->parsed()) return cmd_wigner(ctx);
        if (coeffs->parsed()) return cmd_coeffs(ctx);
        if (deph->parsed()) return cmd_dephasing(ctx);
        if (sweep->parsed()) return cmd_sweep(ctx);
        if (validate->parsed()) return cmd_validate(ctx);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ibc::ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ibc::Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kConfigError;
}

}  // namespace ibccli
