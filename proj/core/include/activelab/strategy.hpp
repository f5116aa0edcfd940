#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "activelab/core.hpp"
#include "activelab/oracle.hpp"

namespace activelab {

/// Everything a strategy may look at. True labels are not reachable from here;
/// only labels already revealed through the pool.
struct StrategyContext {
  const PoolState& pool;
  const PredictionMatrix& predictions;
  std::uint64_t rng_seed = 0;
  std::size_t iteration = 0;
};

using Diagnostics = std::vector<std::pair<std::string, std::size_t>>;

/// Sequential query strategy. Within one iteration the harness calls
/// begin_iteration once, then alternates next_query / observe for every
/// label in the batch.
class QueryStrategy {
 public:
  virtual ~QueryStrategy() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual void begin_iteration(const StrategyContext& /*ctx*/) {}
  /// An unlabeled id. Throws PoolExhausted when none remain.
  virtual SampleId next_query(const StrategyContext& ctx) = 0;
  /// Called after `id` has been labeled in ctx.pool.
  virtual void observe(const StrategyContext& /*ctx*/, SampleId /*id*/, ClassId /*label*/) {}
  /// Per-iteration counters for the run log; reset by begin_iteration.
  virtual Diagnostics diagnostics() const { return {}; }
};

class RandomStrategy final : public QueryStrategy {
 public:
  explicit RandomStrategy(std::uint64_t seed) : rng_(seed) {}

  std::string_view name() const noexcept override { return "random"; }
  SampleId next_query(const StrategyContext& ctx) override;

 private:
  std::mt19937_64 rng_;
};

/// Least-confidence sampling: the unlabeled id with the smallest maximum
/// class probability, ties by ascending id. The ranking is computed once per
/// iteration since the predictions do not change within a batch.
class ConfidenceStrategy final : public QueryStrategy {
 public:
  std::string_view name() const noexcept override { return "confidence"; }
  void begin_iteration(const StrategyContext& ctx) override;
  SampleId next_query(const StrategyContext& ctx) override;

 private:
  const PredictionMatrix* ranked_for_ = nullptr;
  std::vector<SampleId> ranking_;
  std::size_t cursor_ = 0;
};

/// Stateless least-confidence choice by a full scan of the unlabeled set.
SampleId confidence_next_query(const StrategyContext& ctx);

/// Ids ordered by (max probability ascending, id ascending).
std::vector<SampleId> confidence_ranking(const PredictionMatrix& predictions);

const std::vector<std::string>& strategy_names();

/// Throws ConfigError listing the valid names when `name` is unknown.
std::unique_ptr<QueryStrategy> make_strategy(std::string_view name, std::uint64_t seed);

struct BatchResult {
  std::vector<std::pair<SampleId, ClassId>> labeled;
  bool budget_exhausted = false;
  bool pool_exhausted = false;

  bool terminal() const noexcept { return budget_exhausted || pool_exhausted; }
};

/// Labels min(batch_size, unlabeled, remaining budget) samples one at a time,
/// feeding each revealed label back to the pool and the strategy before the
/// next query.
BatchResult select_batch(QueryStrategy& strategy, PoolState& pool,
                         const PredictionMatrix& predictions, Oracle& oracle,
                         std::size_t batch_size, std::size_t iteration, std::uint64_t rng_seed);

}  // namespace activelab
