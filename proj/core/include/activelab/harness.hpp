#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "activelab/config.hpp"
#include "activelab/core.hpp"
#include "activelab/learner.hpp"
#include "activelab/oracle.hpp"
#include "activelab/strategy.hpp"

namespace activelab {

/// Metrics recorded after each retrain.
struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t labels_acquired = 0;
  double test_accuracy = 0.0;
  std::size_t per_class_min_queries = 0;
  double cumulative_flops = 0.0;
  double cumulative_cost = 0.0;
  Diagnostics strategy_diagnostics;
};

struct RunResult {
  std::string strategy;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> iterations;
  std::vector<QueryLogEntry> query_log;
  std::optional<Model> final_model;
  bool pool_exhausted = false;
};

/// Observation points for tests and tooling; invoked on the thread executing
/// the run.
struct RunHooks {
  /// Pool predictions used for selection in `iteration`.
  std::function<void(std::size_t iteration, const PredictionMatrix&)> on_predictions;
  std::function<void(std::size_t iteration, const PoolState&)> on_iteration_end;
};

/// Generates or loads the dataset described by `config.data`.
Dataset materialize_data(const ExperimentConfig& config);

/// base_seed + run_index.
std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run_index) noexcept;

/// One pool-based active-learning run: partition, a random first batch, then
/// retrain from scratch / predict the pool / select the next batch
/// sequentially until the budget is spent or the pool is exhausted.
RunResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                         std::uint64_t run_seed, const RunHooks& hooks = {});
RunResult run_experiment(const ExperimentConfig& config, std::uint64_t run_seed,
                         const RunHooks& hooks = {});

/// Fraction of `test` whose argmax prediction (ties: lowest class) is correct.
double accuracy(const Model& model, const Dataset& test);

std::size_t per_class_min_queries(const PoolState& pool, std::size_t num_classes);

/// Centered moving average; the window is clipped at the ends so the output
/// has the input's length. Window w covers [i - (w-1)/2, i + w/2].
std::vector<double> smooth(std::span<const double> curve, std::size_t window);

struct TargetReach {
  double target = 0.0;
  std::optional<std::size_t> labels;
};

struct AggregateResult {
  std::string strategy;
  std::size_t runs = 0;
  std::vector<std::size_t> labels_acquired;
  std::vector<double> mean_accuracy;
  std::vector<double> stderr_accuracy;
  std::vector<double> mean_min_queries;
  std::vector<double> smoothed_accuracy;
  std::vector<TargetReach> labels_to_reach;
  double mean_total_flops = 0.0;
  double mean_total_cost = 0.0;
};

/// Smallest x with curve[x] >= target, if any.
std::optional<std::size_t> labels_to_reach(std::span<const std::size_t> labels,
                                           std::span<const double> curve, double target);

/// Labels acquired when per_class_min_queries first reaches `threshold`.
std::optional<std::size_t> labels_to_min_queries(const RunResult& run, std::size_t threshold);

/// Pointwise mean and standard error (sample std / sqrt(runs); zero for a
/// single run). Throws GridMismatch when the runs disagree on labels_acquired.
AggregateResult aggregate(std::span<const RunResult> results, const ExperimentConfig& config);

/// config.runs independent runs over one dataset, up to `jobs` at a time.
std::vector<RunResult> run_all(const ExperimentConfig& config, const Dataset& dataset,
                               std::size_t jobs, const RunHooks& hooks = {});

struct ReductionRow {
  std::string target_name;
  double target = 0.0;
  std::string strategy;
  std::optional<std::size_t> labels;
  std::optional<double> reduction_vs_random_percent;
};

struct DiversityRow {
  std::string strategy;
  std::size_t threshold = 0;
  std::size_t runs_reached = 0;
  /// Mean over runs, counting a run that never reached the threshold at its
  /// final labels_acquired (a lower bound).
  double mean_labels = 0.0;
  std::optional<double> reduction_vs_random_percent;
};

/// Class-diversity summary of one strategy's runs.
DiversityRow min_queries_summary(const std::string& strategy, std::span<const RunResult> runs,
                                 std::size_t threshold);

struct Comparison {
  std::vector<ExperimentConfig> configs;
  std::vector<std::vector<RunResult>> runs;  // parallel to configs
  std::vector<AggregateResult> aggregates;   // parallel to configs
  std::vector<ReductionRow> reductions;
  std::vector<DiversityRow> diversity;
};

/// Throws ConfigError unless there are >= 2 distinct strategies whose
/// configs differ only in the strategy name; GridMismatch when batch size or
/// budget differ.
void validate_comparable(std::span<const ExperimentConfig> configs);

/// Runs every strategy on run-index-matched seeds and builds the
/// labels-to-reach and class-diversity tables. Adds a "mid-range" target at
/// 95% of random sampling's final smoothed accuracy when random is present.
Comparison compare(std::span<const ExperimentConfig> configs, std::size_t jobs,
                   const RunHooks& hooks = {});

}  // namespace activelab
