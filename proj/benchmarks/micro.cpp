#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sni/cholesky.hpp"
#include "sni/fast_marching.hpp"
#include "sni/krylov.hpp"
#include "sni/poisson.hpp"
#include "sni/spectral.hpp"
#include "sni/synthetic.hpp"

namespace {

using namespace sni;

void BM_Assemble(benchmark::State& state) {
  const Dataset s = gen_sombrero(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(s.domain, s.gradient));
  state.SetItemsProcessed(state.iterations() * s.domain.size());
}
BENCHMARK(BM_Assemble)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FastMarching(benchmark::State& state) {
  const Dataset s = gen_sombrero(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_fm(s.gradient, s.domain));
  state.SetItemsProcessed(state.iterations() * s.domain.size());
}
BENCHMARK(BM_FastMarching)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

// range(1): drop tolerance exponent, 0 means tau = 0
void BM_MicFactorize(benchmark::State& state) {
  const Dataset s = gen_phantom(static_cast<int>(state.range(0)));
  const SparseSystem sys = assemble(s.domain, s.gradient);
  const double tau = state.range(1) == 0 ? 0.0 : std::pow(10.0, -static_cast<double>(state.range(1)));
  std::size_t fill = 0;
  for (auto _ : state) {
    const CholeskyFactor f = mic_factorize(sys.A, tau, 1e-3);
    fill = f.fill_count();
    benchmark::DoNotOptimize(f.val.data());
  }
  state.counters["nnz_per_row"] = static_cast<double>(fill) / sys.size();
}
BENCHMARK(BM_MicFactorize)->ArgsProduct({{256, 512}, {0, 2, 3, 4}})->Unit(benchmark::kMillisecond);

void BM_ApplyPreconditioner(benchmark::State& state) {
  const Dataset s = gen_phantom(512);
  const SparseSystem sys = assemble(s.domain, s.gradient);
  const CholeskyFactor f = mic_factorize(sys.A, 1e-3, 1e-3);
  std::vector<double> z(sys.b.size());
  for (auto _ : state) {
    apply_preconditioner(f, sys.b, z);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_ApplyPreconditioner)->Unit(benchmark::kMillisecond);

// range(1): 0 plain CG, 1 MIC(1e-3), 2 MIC(1e-3) from the fast-marching guess
void BM_Solve(benchmark::State& state) {
  const Dataset s = gen_sombrero(static_cast<int>(state.range(0)));
  const SparseSystem sys = compatibilize(assemble(s.domain, s.gradient));
  SolverConfig cfg;
  cfg.preconditioner = state.range(1) == 0 ? PreconditionerKind::kNone : PreconditionerKind::kMic;
  std::vector<double> x0;
  if (state.range(1) == 2) x0 = gather(s.domain, integrate_fm(s.gradient, s.domain));
  const auto factor = build_preconditioner(sys.A, cfg);
  int its = 0;
  for (auto _ : state) {
    const SolveResult r = cg_solve(sys, x0, factor ? &*factor : nullptr, cfg);
    its = r.stats.iterations;
    benchmark::DoNotOptimize(r.x.data());
  }
  state.counters["iterations"] = its;
}
BENCHMARK(BM_Solve)->ArgsProduct({{256, 512}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_Dct(benchmark::State& state) {
  const Dataset s = gen_peaks(static_cast<int>(state.range(0)));
  const RectGradient rg = embed_masked(s.domain, s.gradient);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_dct(rg));
}
BENCHMARK(BM_Dct)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
