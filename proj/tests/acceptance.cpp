// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers on
// the command line to run a subset; the exit status is 0 only if every
// selected criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "ibc/closedform.hpp"
#include "ibc/dephasing.hpp"
#include "ibc/errors.hpp"
#include "ibc/gaussian.hpp"
#include "ibc/lindblad_exact.hpp"
#include "ibc/observables.hpp"
#include "ibc/validation.hpp"

using namespace ibc;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

const SystemParams& reference() {
    static const SystemParams p = build_system(quantronium_inputs());
    return p;
}

const CheckResult* find(const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

Outcome half_time() {
    const auto t0 = Clock::now();
    const SystemParams& p = reference();
    const std::vector<double> grid = linspace(0.0, 0.2 * p.T0, 401);
    const BlochSeries s = bloch_series(p, Mode::irreversible, grid);
    std::size_t k = 1;
    while (k < grid.size() && s.lengths[k] > 0.5) ++k;
    if (k == grid.size()) return {false, "B(t) stays above 0.5 on [0, 0.2 T0]"};

    auto f = [&](double t) { return bloch_length(integrate_to(p, Mode::irreversible, t)) - 0.5; };
    boost::uintmax_t iters = 100;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        f, grid[k - 1], grid[k], boost::math::tools::eps_tolerance<double>(50), iters);
    const double t_half = 0.5 * (lo + hi);
    const double ratio = t_half / p.T0;
    const double ns = t_half * 1e9;
    const double runtime = seconds_since(t0);
    const bool ok = std::abs(ratio - 0.034) <= 0.1 * 0.034 && ns >= 0.16 && ns <= 0.22 && runtime < 60.0;
    return {ok, "t_half = " + num(ratio) + " T0 (band 0.034 +- 10%) = " + num(ns) + " ns (band [0.16, 0.22]); T0 = " +
                    num(p.T0 * 1e9) + " ns; runtime " + num(runtime, 3) + " s"};
}

Outcome revival() {
    const SystemParams& p = reference();
    const std::size_t n = 2001;
    const std::vector<double> grid = linspace(0.0, 4.0 * p.T0, 2 * n - 1);
    const BlochSeries s = bloch_series(p, Mode::reversible, grid);
    const double b2 = s.lengths[n - 1];
    double drift = 0.0;
    for (std::size_t i = 0; i < n; ++i) drift = std::max(drift, std::abs(s.lengths[i + n - 1] - s.lengths[i]));
    const bool ok = b2 >= 0.999 && drift <= 1e-4;
    return {ok, "B(2T0) = " + num(b2) + " (>= 0.999); max |B(t + 2T0) - B(t)| on [0, 2T0] = " + num(drift, 3) +
                    " (<= 1e-4); B(4T0) = " + num(s.lengths.back())};
}

Outcome oracles() {
    const auto t0 = Clock::now();
    const ValidationReport r = run_oracle_suite(reference());
    const double runtime = seconds_since(t0);
    const char* names[] = {"oracle.closedform_vs_ode", "oracle.tov_cde_quartic_vs_ode",
                           "oracle.tov_cde_closed_vs_ode"};
    const char* labels[] = {"closed form vs ODE", "quartic P (I = 0)", "closed-form P (I != 0)"};
    const double bounds[] = {1e-6, 1e-5, 1e-5};
    bool ok = runtime < 60.0;
    std::string text;
    for (int i = 0; i < 3; ++i) {
        const CheckResult* c = find(r, names[i]);
        if (!c) return {false, std::string("missing check ") + names[i]};
        ok = ok && c->measured <= bounds[i];
        text += std::string(labels[i]) + " " + num(c->measured, 3) + " (<= " + num(bounds[i], 1) + "); ";
    }
    return {ok, text + "runtime " + num(runtime, 3) + " s"};
}

// Trapezoid sum of (W+ + W-)/2 over a box covering 10 sigma of both components.
double diagonal_mass(const SystemParams& p, Mode m, double t) {
    const GaussianState a = evolve_diagonal(p, Branch::plus, m, t);
    const GaussianState b = evolve_diagonal(p, Branch::minus, m, t);
    const GridBounds box = required_bounds(p, m, t, 10.0);
    const int n = 600;
    const double hx = (box.gamma_max - box.gamma_min) / n, hy = (box.N_max - box.N_min) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double w = (i == 0 || i == n ? 0.5 : 1.0) * (j == 0 || j == n ? 0.5 : 1.0);
            const double x = box.gamma_min + i * hx, y = box.N_min + j * hy;
            s += w * 0.5 * (a.density(x, y) + b.density(x, y));
        }
    return s * hx * hy;
}

Outcome normalization() {
    const SystemParams& p = reference();
    double mass_err = 0.0;
    for (Mode m : {Mode::reversible, Mode::irreversible})
        for (int k = 0; k < 10; ++k) mass_err = std::max(mass_err, std::abs(diagonal_mass(p, m, k * 0.2 * p.T0) - 1.0));

    double det_drift = 0.0;
    bool monotone = true;
    double worst_growth = 0.0, last_ratio = 0.0;
    for (Branch b : {Branch::plus, Branch::minus}) {
        const double det0 = evolve_diagonal(p, b, Mode::reversible, 0.0).det();
        double prev = evolve_diagonal(p, b, Mode::irreversible, 0.0).det();
        const cplx c12_0 = initial_alpha_covariance(p, b)(0, 1);
        for (int k = 1; k <= 200; ++k) {
            const double t = k * 0.02 * p.T0;
            det_drift = std::max(det_drift, std::abs(evolve_diagonal(p, b, Mode::reversible, t).det() / det0 - 1.0));
            const double d = evolve_diagonal(p, b, Mode::irreversible, t).det();
            monotone = monotone && d >= prev * (1.0 - 1e-12);
            prev = d;
            // Growth of <{da, da'}>/2 against |E_b| Gamma^2 t / 2.
            const double grown = (evolve_alpha(p, b, Mode::irreversible, t).cov(0, 1) - c12_0).real();
            const double expected = std::abs(p.E_b) * p.Gamma(b) * p.Gamma(b) * t / 2.0;
            last_ratio = grown / expected;
            worst_growth = std::max(worst_growth, std::abs(last_ratio - 1.0));
        }
    }
    const bool ok = mass_err <= 1e-6 && det_drift <= 1e-9 && monotone && worst_growth <= 1e-8;
    return {ok, "mass error " + num(mass_err, 3) + " (<= 1e-6); reversible det drift " + num(det_drift, 3) +
                    " (<= 1e-9); irreversible det non-decreasing: " + (monotone ? "yes" : "no") +
                    "; covariance growth vs |E_b| Gamma^2 t / 2: relative error " + num(worst_growth, 3) +
                    " (<= 1e-8), measured/expected " + num(last_ratio, 10)};
}

Outcome classical_limit() {
    const auto t0 = Clock::now();
    std::vector<ClassicalLimitPoint> rows;
    const ValidationReport r = run_classical_limit_suite({1e-2, 1e-3, 1e-4}, {}, &rows);
    const double runtime = seconds_since(t0);
    const CheckResult* mono = find(r, "classical_limit.monotone");
    const bool ok = mono && mono->pass && rows.back().rel_error < 0.05 && runtime < 300.0;
    std::string text = "relative error of time-averaged <I> vs I_bias:";
    for (const auto& row : rows) text += " nu=" + num(row.nu, 2) + ": " + num(row.rel_error, 3);
    return {ok, text + " (last < 0.05, monotone); runtime " + num(runtime, 3) + " s"};
}

Outcome pde_residual_check() {
    std::vector<PdeResidualRow> rows;
    const ValidationReport r = run_pde_residual_suite(reference(), &rows);
    double worst = 0.0;
    for (const auto& c : r.checks)
        if (c.name.find("refinement") == std::string::npos) worst = std::max(worst, c.measured);
    return {r.all_pass(), "worst relative residual " + num(worst, 3) +
                              " (< 1e-4) at t in {T0/8, T0/4, T0/2}; decreases under refinement: " +
                              (r.all_pass() ? "yes" : "no")};
}

Outcome noise_budget() {
    const CircuitNoise c = quantronium_circuit();
    const double gn = gamma_noise(c), gd = gamma_deph(c);
    const double quoted_noise = 9.68e9, quoted_deph = 555e6;
    const double en = gn / quoted_noise - 1.0, ed = gd / quoted_deph - 1.0;
    const double quoted_ratio = quoted_noise / quoted_deph;
    const double identity = rate_ratio_identity(c) / (gn / gd) - 1.0;
    const bool ok = std::abs(en) <= 0.2 && std::abs(ed) <= 0.2 && std::abs(quoted_ratio - 17.4) < 0.05 &&
                    std::abs(identity) < 1e-12;
    return {ok, "R1 = 50 ohm, R2 = 3.5 kohm, T = 4.2 K, B = 200 MHz: gamma_noise " + num(gn, 4) + " s^-1 (" +
                    num(100 * en, 3) + "%), gamma_deph " + num(gd, 4) + " s^-1 (" + num(100 * ed, 3) +
                    "%); quoted ratio " + num(quoted_ratio, 4) + "; identity residual " + num(identity, 2)};
}

Outcome figures() {
    const SystemParams& p = reference();

    // Interference fringes between the lobes in the reversible snapshot.
    const double t3 = 16.932e-9;
    const GaussianState a = evolve_diagonal(p, Branch::plus, Mode::reversible, t3);
    const GaussianState b = evolve_diagonal(p, Branch::minus, Mode::reversible, t3);
    const CoeffState s3 = integrate_to(p, Mode::reversible, t3);
    const double gm = 0.5 * (a.mean_gamma + b.mean_gamma);
    const double nm = 0.5 * (a.mean_N + b.mean_N);
    const double sn = 5.0 * std::sqrt(std::max(a.var_N, b.var_N));
    int changes = 0;
    double prev = 0.0;
    for (double N : linspace(nm - sn, nm + sn, 2001)) {
        const double w = 0.5 * (0.5 * (a.density(gm, N) + b.density(gm, N)) + eval_offdiag(s3, gm, N).real());
        if (prev != 0.0 && w * prev < 0.0) ++changes;
        if (w != 0.0) prev = w;
    }

    // Fringe suppression with a 25x stronger qubit coupling.
    PhysicalInputs in = quantronium_inputs();
    in.E_J *= 25.0;
    const SystemParams q = build_system(in);
    const WignerGrid g = assemble_ws(q, Mode::irreversible, q.T0);
    const GaussianState qa = evolve_diagonal(q, Branch::plus, Mode::irreversible, q.T0);
    const GaussianState qb = evolve_diagonal(q, Branch::minus, Mode::irreversible, q.T0);
    const CoeffState s6 = integrate_to(q, Mode::irreversible, q.T0);
    double lobe = 0.0, fringe = 0.0;
    for (double x : g.gamma_axis)
        for (double y : g.N_axis) {
            lobe = std::max(lobe, 0.5 * (qa.density(x, y) + qb.density(x, y)));
            fringe = std::max(fringe, std::abs(eval_offdiag(s6, x, y).real()));
        }
    const double rel = fringe / lobe;
    const bool ok = changes >= 3 && rel < 0.01;
    return {ok, "reversible t = 16.932 ns: " + std::to_string(changes) +
                    " sign changes along N at mid-gamma (>= 3); irreversible x25 E_J at T0: fringe/lobe " +
                    num(rel, 3) + " (< 0.01)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"dephasing half-time", half_time},
        {"reversible revival", revival},
        {"oracle equivalence", oracles},
        {"normalization and purity", normalization},
        {"classical limit", classical_limit},
        {"PDE residual", pde_residual_check},
        {"noise budget", noise_budget},
        {"figure fringes", figures},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.summary.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
