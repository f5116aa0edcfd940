#include <benchmark/benchmark.h>

#include "activelab/galaxy.hpp"
#include "activelab/learner.hpp"
#include "activelab/simdata.hpp"
#include "activelab/strategy.hpp"

namespace {

using namespace activelab;

const Dataset& flash_pool() {
  static const Dataset pool = partition(generate_synthetic(GenConfig{}), 10, 1).train;
  return pool;
}

LabeledSet first_n(const Dataset& ds, std::size_t n) {
  LabeledSet set(ds.dim());
  for (SampleId id = 0; id < n && id < ds.size(); ++id) set.add(ds[id].features, ds[id].true_label);
  return set;
}

void BM_TrainSoftmax(benchmark::State& state) {
  const auto& pool = flash_pool();
  const auto labeled = first_n(pool, static_cast<std::size_t>(state.range(0)));
  LearnerConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(train(cfg, labeled, pool.num_classes(), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0) * cfg.epochs);
}
BENCHMARK(BM_TrainSoftmax)->Arg(204)->Arg(2040)->Unit(benchmark::kMillisecond);

void BM_PredictMatrix(benchmark::State& state) {
  const auto& pool = flash_pool();
  const Model model = train(LearnerConfig{}, first_n(pool, 2040), pool.num_classes(), 7);
  for (auto _ : state) benchmark::DoNotOptimize(predict_matrix(model, pool));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pool.size()));
}
BENCHMARK(BM_PredictMatrix)->Unit(benchmark::kMillisecond);

// One GALAXY batch of 204 queries on the flash pool, from graph build to the
// last observe, with `range(0)` labels already revealed.
void BM_GalaxyBatch(benchmark::State& state) {
  const auto& pool_data = flash_pool();
  const auto labeled = static_cast<std::size_t>(state.range(0));
  const Model model = train(LearnerConfig{}, first_n(pool_data, labeled), pool_data.num_classes(), 7);
  const PredictionMatrix preds = predict_matrix(model, pool_data);
  for (auto _ : state) {
    state.PauseTiming();
    PoolState pool(pool_data.size());
    for (SampleId id = 0; id < labeled; ++id) pool.mark_labeled(id, pool_data[id].true_label, 1);
    state.ResumeTiming();
    GalaxyStrategy galaxy;
    const StrategyContext ctx{pool, preds, 0, 2};
    galaxy.begin_iteration(ctx);
    for (int q = 0; q < 204; ++q) {
      const SampleId id = galaxy.next_query(ctx);
      pool.mark_labeled(id, pool_data[id].true_label, 2);
      galaxy.observe(ctx, id, pool_data[id].true_label);
    }
  }
  state.SetItemsProcessed(state.iterations() * 204);
}
BENCHMARK(BM_GalaxyBatch)->Arg(204)->Arg(4080)->Unit(benchmark::kMillisecond);

void BM_ConfidenceBatch(benchmark::State& state) {
  const auto& pool_data = flash_pool();
  const Model model = train(LearnerConfig{}, first_n(pool_data, 204), pool_data.num_classes(), 7);
  const PredictionMatrix preds = predict_matrix(model, pool_data);
  for (auto _ : state) {
    PoolState pool(pool_data.size());
    ConfidenceStrategy strategy;
    const StrategyContext ctx{pool, preds, 0, 1};
    strategy.begin_iteration(ctx);
    for (int q = 0; q < 204; ++q) {
      const SampleId id = strategy.next_query(ctx);
      pool.mark_labeled(id, pool_data[id].true_label, 1);
      strategy.observe(ctx, id, pool_data[id].true_label);
    }
  }
  state.SetItemsProcessed(state.iterations() * 204);
}
BENCHMARK(BM_ConfidenceBatch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
