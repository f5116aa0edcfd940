#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "activelab/harness.hpp"

namespace activelab {

/// `iteration,labels_acquired,test_accuracy,per_class_min_queries,cumulative_flops`
void write_run_csv(std::ostream& out, const RunResult& run);

/// `labels_acquired,mean_accuracy,stderr_accuracy,mean_min_queries`
void write_aggregate_csv(std::ostream& out, const AggregateResult& agg);

struct AggregateCurves {
  std::vector<double> labels_acquired;
  std::vector<double> mean_accuracy;
  std::vector<double> stderr_accuracy;
  std::vector<double> mean_min_queries;
};

/// Throws FormatError.
AggregateCurves read_aggregate_csv(std::istream& in);

/// `{"kind", "K", "d", "hidden_units", "parameters": [...]}`
nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

/// Per-run log: seed, per-iteration strategy diagnostics, final model.
nlohmann::json run_to_json(const RunResult& run);

/// Layout written under `dir` for one strategy:
///   run_<i>.csv, querylog_<i>.csv, run_<i>.json, aggregate.csv
void write_strategy_outputs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                            const AggregateResult& agg);

/// Writes `<out>/<strategy>/...` for every strategy, `<out>/manifest.json`
/// and `<out>/summary.json`. When `cmp` holds more than one strategy it also
/// writes `<out>/comparison.csv` and `<out>/reduction.csv`. `created_at` only
/// appears in summary.json's metadata block.
void write_comparison_outputs(const std::filesystem::path& out, const Comparison& cmp,
                              const std::string& created_at);

/// Wraps a single-strategy result set in a Comparison so `run` and `compare`
/// share one output layout.
Comparison single_strategy(const ExperimentConfig& config, std::vector<RunResult> runs);

}  // namespace activelab
