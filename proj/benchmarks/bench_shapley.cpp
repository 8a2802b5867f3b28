// Microbenchmarks for the attribution hot paths: exact enumeration growth,
// kernel budget scaling, Monte Carlo sampling throughput, and the effect of
// the worker count.

#include <benchmark/benchmark.h>

#include "qxai/kernel_shap.hpp"
#include "qxai/mc_shapley.hpp"
#include "qxai/nnet/mlp.hpp"
#include "qxai/nnet/train.hpp"
#include "qxai/random_game.hpp"
#include "qxai/shapley_exact.hpp"
#include "qxai/synthetic.hpp"

using namespace qxai;
using namespace qxai::nnet;

namespace {

struct Fixture {
  Dataset data = make_planted_regression(256, 8, 17);
  Predictor model;
  Fixture() {
    Mlp mlp(MlpSpec{{8, 16, 16, 1}}, 17);
    TrainConfig cfg;
    cfg.epochs = 10;
    cfg.seed = 17;
    train_mlp(mlp, data, cfg);
    model = make_predictor(mlp);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

static void BM_ExactShapleySubset(benchmark::State& state) {
  auto game = random_game(int(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_shapley(game));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactShapleySubset)->DenseRange(4, 14, 2)->Complexity();

static void BM_ExactShapleyPermutation(benchmark::State& state) {
  auto game = random_game(int(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(exact_shapley_permutation(game));
}
BENCHMARK(BM_ExactShapleyPermutation)->DenseRange(3, 8, 1);

static void BM_KernelShapBudget(benchmark::State& state) {
  auto& f = fixture();
  KernelConfig kc;
  kc.budget = std::size_t(state.range(0));
  kc.background_cap = 32;
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel_shap_explain(f.model, f.data.rows[0], f.data, kc));
}
BENCHMARK(BM_KernelShapBudget)->RangeMultiplier(2)->Range(16, 254);

static void BM_KernelShapWorkers(benchmark::State& state) {
  auto& f = fixture();
  KernelConfig kc;
  kc.budget = 254;
  kc.background_cap = 64;
  kc.workers = std::size_t(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kernel_shap_explain(f.model, f.data.rows[0], f.data, kc));
}
BENCHMARK(BM_KernelShapWorkers)->DenseRange(1, 8, 1)->UseRealTime();

static void BM_McShapleySamples(benchmark::State& state) {
  auto& f = fixture();
  McConfig mc;
  mc.samples_per_feature = std::size_t(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_shapley(f.model, f.data.rows[0], f.data, mc));
}
BENCHMARK(BM_McShapleySamples)->RangeMultiplier(4)->Range(64, 4096);

static void BM_McShapleyWorkers(benchmark::State& state) {
  auto& f = fixture();
  McConfig mc;
  mc.samples_per_feature = 2048;
  mc.permutation_sweep = true;
  mc.workers = std::size_t(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_shapley(f.model, f.data.rows[0], f.data, mc));
}
BENCHMARK(BM_McShapleyWorkers)->DenseRange(1, 8, 1)->UseRealTime();
