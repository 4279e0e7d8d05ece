#include <benchmark/benchmark.h>

#include "ibc/coeffode.hpp"
#include "ibc/lindblad_exact.hpp"
#include "ibc/observables.hpp"

namespace {

const ibc::SystemParams& reference() {
    static const ibc::SystemParams p = ibc::build_system(ibc::quantronium_inputs());
    return p;
}

void BM_CoeffIntegrate(benchmark::State& state) {
    const ibc::SystemParams& p = reference();
    const auto mode = state.range(0) ? ibc::Mode::irreversible : ibc::Mode::reversible;
    const std::vector<double> grid = ibc::linspace(0.0, 2.0 * p.T0, 401);
    for (auto _ : state) benchmark::DoNotOptimize(ibc::integrate(p, mode, grid));
}
BENCHMARK(BM_CoeffIntegrate)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_BlochSeries(benchmark::State& state) {
    const ibc::SystemParams& p = reference();
    const std::vector<double> grid = ibc::linspace(0.0, 4.0 * p.T0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ibc::bloch_series(p, ibc::Mode::reversible, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BlochSeries)->Arg(401)->Arg(4001)->Unit(benchmark::kMicrosecond);

void BM_LindbladStencil(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    const ibc::JunctionOps ops = ibc::build_operators(n_max, 0.3, 30.0);
    const ibc::DenseState rho = ibc::phase_gaussian(n_max, 0.3, n_max / 4.0);
    Eigen::MatrixXcd out;
    for (auto _ : state) {
        ibc::rhs_stencil(rho.matrix, ops, 9.0, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_LindbladStencil)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_LindbladSparse(benchmark::State& state) {
    const int n_max = static_cast<int>(state.range(0));
    const ibc::JunctionOps ops = ibc::build_operators(n_max, 0.3, 30.0);
    const ibc::DenseState rho = ibc::phase_gaussian(n_max, 0.3, n_max / 4.0);
    for (auto _ : state) benchmark::DoNotOptimize(ibc::rhs(rho.matrix, ops, 9.0));
}
BENCHMARK(BM_LindbladSparse)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_AssembleWs(benchmark::State& state) {
    const ibc::SystemParams& p = reference();
    ibc::GridSpec spec;
    spec.n_gamma = spec.n_N = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ibc::assemble_ws(p, ibc::Mode::irreversible, 0.5 * p.T0, spec));
}
BENCHMARK(BM_AssembleWs)->Arg(101)->Arg(401)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
