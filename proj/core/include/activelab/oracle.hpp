#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "activelab/core.hpp"

namespace activelab {

/// Per-query labeling cost. The default FLOP rate is the cost of labeling one
/// signal with a cyclostationary signal-processing detector.
struct OracleConfig {
  double flops_per_query = 3.35e7;
  double unit_cost_per_query = 0.0;

  void validate() const;
  friend bool operator==(const OracleConfig&, const OracleConfig&) = default;
};

struct QueryReceipt {
  SampleId id = 0;
  ClassId label = 0;
  std::size_t cumulative_queries = 0;
  double cumulative_flops = 0.0;
  double cumulative_cost = 0.0;
  bool repeat = false;
};

struct QueryLogEntry {
  std::size_t iteration = 0;
  SampleId id = 0;
  ClassId label = 0;
  double cumulative_flops = 0.0;
  double cumulative_cost = 0.0;

  friend bool operator==(const QueryLogEntry&, const QueryLogEntry&) = default;
};

/// Exact labeler over the training pool. Holds the hidden labels, enforces
/// the budget and charges each first-time query.
class Oracle {
 public:
  Oracle(std::vector<ClassId> truth, OracleConfig config, std::size_t max_labels);

  /// Reveals the label of `id`. A repeat query returns the cached label at no
  /// cost with `repeat` set. Throws UnknownId, or BudgetExceeded when the
  /// budget is spent and `id` has not been queried before.
  QueryReceipt query(SampleId id, std::size_t iteration);

  const BudgetTracker& budget() const noexcept { return budget_; }
  const OracleConfig& config() const noexcept { return config_; }
  std::size_t pool_size() const noexcept { return truth_.size(); }
  bool was_revealed(SampleId id) const { return revealed_.at(id) != 0; }
  std::span<const QueryLogEntry> log() const noexcept { return log_; }

 private:
  std::vector<ClassId> truth_;
  std::vector<char> revealed_;
  OracleConfig config_;
  BudgetTracker budget_;
  std::vector<QueryLogEntry> log_;
};

/// `iteration,id,label,cumulative_flops,cumulative_cost`
void write_query_log_csv(std::ostream& out, std::span<const QueryLogEntry> log);

}  // namespace activelab
