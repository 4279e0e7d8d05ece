#include "ibcsim_cli/commands.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <limits>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "ibc/closedform.hpp"
#include "ibc/dephasing.hpp"
#include "ibc/errors.hpp"
#include "ibc/lindblad_exact.hpp"
#include "ibc/observables.hpp"
#include "ibc/validation.hpp"

#ifndef IBCSIM_VERSION
#define IBCSIM_VERSION "0.0.0"
#endif

namespace ibccli {

const char* version() { return IBCSIM_VERSION; }

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::vector<double> time_grid(const RunConfig& cfg, const ibc::SystemParams& p) {
    if (cfg.samples < 2) throw ConfigError("samples must be at least 2");
    const double t_max = cfg.t_max.seconds(p);
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    return ibc::linspace(0.0, t_max, cfg.samples);
}

double over_T0(double t, const ibc::SystemParams& p) { return std::isfinite(p.T0) ? t / p.T0 : 0.0; }

std::string mode_file(const std::string& stem, ibc::Mode m) { return stem + "_" + ibc::to_string(m) + ".csv"; }

void report_file(const Context& ctx, const std::string& path) { *ctx.out << "wrote " << path << '\n'; }

}  // namespace

Metadata file_metadata(const Context& ctx, const std::string& command, const ibc::SystemParams& p) {
    Metadata m;
    m.emplace_back("tool", "ibcsim");
    m.emplace_back("version", version());
    m.emplace_back("command", command);
    if (!ctx.deterministic) m.emplace_back("generated_at", utc_now());
    for (auto& kv : ibc::describe(p)) m.push_back(kv);
    for (auto& kv : echo(ctx.cfg)) m.push_back(kv);
    return m;
}

int cmd_bloch(const Context& ctx) {
    const ibc::SystemParams p = resolve(ctx.cfg);
    const std::vector<double> grid = time_grid(ctx.cfg, p);
    ensure_directory(ctx.cfg.output_dir);
    for (ibc::Mode m : ctx.cfg.modes) {
        const ibc::BlochSeries s = ibc::bloch_series(p, m, grid, ctx.cfg.tolerances);
        Metadata meta = file_metadata(ctx, "bloch", p);
        meta.emplace_back("mode", ibc::to_string(m));
        CsvWriter w(join_path(ctx.cfg.output_dir, mode_file("bloch", m)), meta,
                    {"t_ns", "t_over_T0", "bloch", "sx", "sy"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            w.row({grid[i] * 1e9, over_T0(grid[i], p), s.lengths[i], s.sx[i], s.sy[i]});
        report_file(ctx, w.path());
    }
    return kOk;
}

int cmd_wigner(const Context& ctx) {
    const ibc::SystemParams p = resolve(ctx.cfg);
    const double t = ctx.cfg.t_snapshot.seconds(p);
    ensure_directory(ctx.cfg.output_dir);
    for (ibc::Mode m : ctx.cfg.modes) {
        const ibc::WignerGrid g = ibc::assemble_ws(p, m, t, ctx.cfg.grid, ctx.cfg.tolerances);
        Metadata meta = file_metadata(ctx, "wigner", p);
        for (const auto& kv : g.metadata)
            if (kv.first == "mode" || kv.first == "t_s" || kv.first == "clamped_points") meta.push_back(kv);
        meta.emplace_back("t_ns", fmt(t * 1e9));
        meta.emplace_back("t_over_T0", fmt(over_T0(t, p)));
        meta.emplace_back("grid_format", ctx.cfg.grid_format);
        const std::string path = join_path(ctx.cfg.output_dir, mode_file("wigner", m));
        if (ctx.cfg.grid_format == "long") {
            CsvWriter w(path, meta, {"gamma", "N", "W_s"});
            for (std::size_t i = 0; i < g.gamma_axis.size(); ++i)
                for (std::size_t j = 0; j < g.N_axis.size(); ++j) w.row({g.gamma_axis[i], g.N_axis[j], g.at(i, j)});
        } else {
            // Structured layout: first row "axis_N" + N values, then one row per gamma.
            std::vector<std::string> header{"gamma\\N"};
            for (double n : g.N_axis) header.push_back(fmt(n));
            CsvWriter w(path, meta, header);
            for (std::size_t i = 0; i < g.gamma_axis.size(); ++i) {
                std::vector<double> row{g.gamma_axis[i]};
                for (std::size_t j = 0; j < g.N_axis.size(); ++j) row.push_back(g.at(i, j));
                w.row(row);
            }
        }
        report_file(ctx, path);
    }
    return kOk;
}

int cmd_coeffs(const Context& ctx) {
    const ibc::SystemParams p = resolve(ctx.cfg);
    const std::vector<double> grid = time_grid(ctx.cfg, p);
    ensure_directory(ctx.cfg.output_dir);
    for (ibc::Mode m : ctx.cfg.modes) {
        const std::vector<ibc::CoeffState> s = ibc::integrate(p, m, grid, ctx.cfg.tolerances);
        Metadata meta = file_metadata(ctx, "coeffs", p);
        meta.emplace_back("mode", ibc::to_string(m));
        CsvWriter w(join_path(ctx.cfg.output_dir, mode_file("coeffs", m)), meta,
                    {"t_ns", "t_over_T0", "re_a", "im_a", "re_b", "im_b", "re_c", "im_c", "re_d", "im_d", "re_e",
                     "im_e", "re_f", "im_f"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<double> row{grid[i] * 1e9, over_T0(grid[i], p)};
            for (double v : s[i].pack()) row.push_back(v);
            w.row(row);
        }
        report_file(ctx, w.path());
    }
    return kOk;
}

int cmd_dephasing(const Context& ctx) {
    const ibc::CircuitNoise& c = ctx.cfg.circuit;
    const double s = ibc::current_noise_spectrum(c);
    const double irms = ibc::i_rms(c);
    const double gn = ibc::gamma_noise(c);
    const double gd = ibc::gamma_deph(c);
    const double two_pi = 2.0 * std::numbers::pi;

    std::ostream& o = *ctx.out;
    o << "R1_ohm," << fmt(c.R1) << "\nR2_ohm," << fmt(c.R2) << "\nT_K," << fmt(c.T) << "\nbandwidth_Hz,"
      << fmt(c.bandwidth) << '\n';
    o << "S_I0_A_per_sqrtHz," << fmt(s) << "\nI_RMS_A," << fmt(irms) << '\n';
    o << "gamma_noise_rad_per_s," << fmt(gn) << "\ngamma_noise_Hz," << fmt(gn / two_pi) << '\n';
    o << "gamma_deph_rad_per_s," << fmt(gd) << "\ngamma_deph_Hz," << fmt(gd / two_pi) << '\n';
    o << "ratio_noise_over_deph," << fmt(gn / gd) << '\n';

    // Which reading of the quoted "9.68 GHz" and "555 MHz" lands closer.
    const double quoted_noise = 9.68e9, quoted_deph = 555e6;
    const double ang = std::abs(gn / quoted_noise - 1.0) + std::abs(gd / quoted_deph - 1.0);
    const double ord = std::abs(gn / two_pi / quoted_noise - 1.0) + std::abs(gd / two_pi / quoted_deph - 1.0);
    o << "nearest_convention," << (ang <= ord ? "angular (value in s^-1)" : "ordinary (value in Hz)") << '\n';
    return kOk;
}

namespace {

struct SweepPoint {
    double bias = 0.0;
    double duration_ns = 0.0;
    double bloch_end = 0.0;
    double half_time_ns = 0.0;
    std::string error;
};

void evaluate_point(const RunConfig& cfg, SweepPoint& pt) {
    try {
        RunConfig local = cfg;
        local.inputs.E_b_ratio = pt.bias;
        local.inputs.I_bias.reset();
        const ibc::SystemParams p = resolve(local);
        const double tau = pt.duration_ns * 1e-9;
        const std::vector<double> grid = ibc::linspace(0.0, tau, std::max<std::size_t>(cfg.samples, 2));
        const ibc::BlochSeries s = ibc::bloch_series(p, ibc::Mode::irreversible, grid, cfg.tolerances);
        pt.bloch_end = s.lengths.back();
        pt.half_time_ns = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (s.lengths[i] <= 0.5) {
                const double f = (s.lengths[i - 1] - 0.5) / (s.lengths[i - 1] - s.lengths[i]);
                pt.half_time_ns = (grid[i - 1] + f * (grid[i] - grid[i - 1])) * 1e9;
                break;
            }
        }
    } catch (const std::exception& e) {
        pt.error = e.what();
    }
}

}  // namespace

int cmd_sweep(const Context& ctx) {
    const std::vector<double> biases = ctx.cfg.sweep_bias.values();
    const std::vector<double> durations = ctx.cfg.sweep_duration_ns.values();
    const std::size_t total = biases.size() * durations.size();
    if (total > ctx.cfg.sweep_cap) {
        std::ostringstream os;
        os << "sweep has " << total << " points, above sweep.cap = " << ctx.cfg.sweep_cap;
        throw ConfigError(os.str());
    }
    for (double d : durations)
        if (!(d > 0.0)) throw ConfigError("sweep durations must be positive");
    const ibc::SystemParams base = resolve(ctx.cfg);
    ensure_directory(ctx.cfg.output_dir);

    std::vector<SweepPoint> points;
    for (double b : biases)
        for (double d : durations) points.push_back({b, d, 0.0, 0.0, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) evaluate_point(ctx.cfg, points[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(ctx.jobs, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    Metadata meta = file_metadata(ctx, "sweep", base);
    meta.emplace_back("mode", "irreversible");
    CsvWriter w(join_path(ctx.cfg.output_dir, "sweep.csv"), meta,
                {"E_b_ratio", "duration_ns", "observable", "value"});
    int failures = 0;
    for (const SweepPoint& pt : points) {
        if (!pt.error.empty()) {
            ++failures;
            *ctx.err << "sweep point E_b_ratio=" << fmt(pt.bias) << " duration_ns=" << fmt(pt.duration_ns)
                     << " failed: " << pt.error << '\n';
            w.row({fmt(pt.bias), fmt(pt.duration_ns), "error", "nan"});
            continue;
        }
        w.row({fmt(pt.bias), fmt(pt.duration_ns), "bloch_end", fmt(pt.bloch_end)});
        w.row({fmt(pt.bias), fmt(pt.duration_ns), "half_time_ns", fmt(pt.half_time_ns)});
    }
    report_file(ctx, w.path());
    return failures ? kNumericalError : kOk;
}

int cmd_validate(const Context& ctx) {
    const ibc::SystemParams p = resolve(ctx.cfg);
    const std::string& suite = ctx.cfg.suite;
    ensure_directory(ctx.cfg.output_dir);
    ibc::ValidationReport rep;

    if (suite == "oracle" || suite == "all") {
        std::vector<ibc::OracleRow> rows;
        rep.merge(ibc::run_oracle_suite(p, ctx.cfg.tolerances, &rows));
        CsvWriter w(join_path(ctx.cfg.output_dir, "validate_oracle.csv"), file_metadata(ctx, "validate oracle", p),
                    {"t_ns", "t_over_T0", "dev_closedform", "dev_uncorrected"});
        for (const auto& r : rows) w.row({r.t * 1e9, over_T0(r.t, p), r.dev_closedform, r.dev_uncorrected});
    }
    if (suite == "classical-limit" || suite == "all") {
        std::vector<ibc::ClassicalLimitPoint> rows;
        ibc::ClassicalLimitSetup setup;
        setup.periods = ctx.cfg.classical_periods;
        setup.bias_ratio = ctx.cfg.classical_bias;
        setup.E_J0 = p.E_J0;
        rep.merge(ibc::run_classical_limit_suite({1e-2, 1e-3, 1e-4}, setup, &rows));
        CsvWriter w(join_path(ctx.cfg.output_dir, "validate_classical_limit.csv"),
                    file_metadata(ctx, "validate classical-limit", p),
                    {"nu", "rel_error", "mean_sin_gamma", "target", "dim", "steps", "trace"});
        for (const auto& r : rows)
            w.row({r.nu, r.rel_error, r.mean_sin, r.target, double(r.dim), double(r.steps), r.trace});
    }
    if (suite == "pde-residual" || suite == "all") {
        std::vector<ibc::PdeResidualRow> rows;
        rep.merge(ibc::run_pde_residual_suite(p, &rows));
        CsvWriter w(join_path(ctx.cfg.output_dir, "validate_pde_residual.csv"),
                    file_metadata(ctx, "validate pde-residual", p), {"t_over_T0", "kappa", "residual"});
        for (const auto& r : rows) w.row({over_T0(r.t, p), r.kappa, r.residual});
    }

    for (const ibc::CheckResult& c : rep.checks) {
        const char* tag = c.informational ? "INFO" : (c.pass ? "PASS" : "FAIL");
        *ctx.out << tag << ' ' << c.name << " measured=" << fmt(c.measured);
        if (!c.informational) *ctx.out << " bound=" << fmt(c.bound);
        if (!c.detail.empty()) *ctx.out << " # " << c.detail;
        *ctx.out << '\n';
    }
    return rep.all_pass() ? kOk : kValidationFailed;
}

}  // namespace ibccli
