#include <benchmark/benchmark.h>

#include "varistore/convergence_lab.hpp"
#include "varistore/grid_ops.hpp"
#include "varistore/noise.hpp"
#include "varistore/regularizers.hpp"
#include "varistore/solvers.hpp"

namespace {

using namespace varistore;

struct Fixture {
  ImageGrid noisy;
  ImageGrid W;
};

Fixture make_fixture(std::size_t n) {
  ImageGrid clean = synthesize_test_image(TestImageKind::Step, n);
  clean.set_spacing(0.2);
  Fixture f{add_noise(clean, {20.0, 0.0, 7}), {}};
  f.W = edge_indicator(f.noisy, {});
  return f;
}

// Fixed iteration count, so the time per iteration is comparable across solvers.
void BM_Solver(benchmark::State& state) {
  const auto kind = static_cast<SolverKind>(state.range(0));
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(1)));
  SolverConfig cfg;
  cfg.solver = kind;
  cfg.lambda_policy = LambdaPolicy::fixed(10.0);
  cfg.gap_tol = 1e-300;
  cfg.max_iters = 50;
  SolveOptions opts;
  opts.form = ObjectiveForm::ForwardOnly;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve(f.noisy, f.W, cfg, RegularizerSpec::tv(), opts));
  }
  state.SetLabel(std::string(to_string(kind)));
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}

void solver_args(benchmark::internal::Benchmark* b) {
  for (SolverKind k : {SolverKind::SplitBregman, SolverKind::PDHG, SolverKind::FGP,
                       SolverKind::ADMM, SolverKind::ProjGrad}) {
    for (int n : {64, 256}) b->Args({static_cast<long>(k), n});
  }
}
BENCHMARK(BM_Solver)->Apply(solver_args)->Unit(benchmark::kMillisecond);

void BM_SplitBregmanToGap(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.lambda_policy = LambdaPolicy::fixed(10.0);
  cfg.gap_tol = 1e-4;
  cfg.max_iters = 100000;
  const auto spec = RegularizerSpec::adaptive(1.0, 0.05, mad_threshold(f.noisy));
  for (auto _ : state) {
    benchmark::DoNotOptimize(split_bregman(f.noisy, f.W, cfg, spec));
  }
}
BENCHMARK(BM_SplitBregmanToGap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EdgeIndicator(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(edge_indicator(f.noisy, {}));
}
BENCHMARK(BM_EdgeIndicator)->Arg(256)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
