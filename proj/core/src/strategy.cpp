#include "activelab/strategy.hpp"

#include <algorithm>
#include <numeric>

#include "activelab/error.hpp"
#include "activelab/galaxy.hpp"

namespace activelab {

SampleId RandomStrategy::next_query(const StrategyContext& ctx) {
  const auto unlabeled = ctx.pool.unlabeled();
  if (unlabeled.empty()) throw PoolExhausted();
  std::uniform_int_distribution<std::size_t> pick(0, unlabeled.size() - 1);
  return unlabeled[pick(rng_)];
}

std::vector<SampleId> confidence_ranking(const PredictionMatrix& predictions) {
  const std::size_t n = predictions.rows();
  std::vector<double> max_prob(n);
  for (std::size_t i = 0; i < n; ++i) max_prob[i] = predictions.max_prob(static_cast<SampleId>(i));
  std::vector<SampleId> order(n);
  std::iota(order.begin(), order.end(), SampleId{0});
  std::sort(order.begin(), order.end(), [&](SampleId a, SampleId b) {
    return max_prob[a] != max_prob[b] ? max_prob[a] < max_prob[b] : a < b;
  });
  return order;
}

void ConfidenceStrategy::begin_iteration(const StrategyContext& ctx) {
  ranking_ = confidence_ranking(ctx.predictions);
  ranked_for_ = &ctx.predictions;
  cursor_ = 0;
}

SampleId ConfidenceStrategy::next_query(const StrategyContext& ctx) {
  if (ctx.pool.unlabeled_count() == 0) throw PoolExhausted();
  if (ranked_for_ != &ctx.predictions || ranking_.size() != ctx.predictions.rows())
    begin_iteration(ctx);
  while (cursor_ < ranking_.size() && ctx.pool.is_labeled(ranking_[cursor_])) ++cursor_;
  if (cursor_ == ranking_.size()) throw PoolExhausted();
  return ranking_[cursor_];
}

SampleId confidence_next_query(const StrategyContext& ctx) {
  const auto unlabeled = ctx.pool.unlabeled();
  if (unlabeled.empty()) throw PoolExhausted();
  SampleId best = unlabeled.front();
  double best_conf = ctx.predictions.max_prob(best);
  for (SampleId id : unlabeled.subspan(1)) {
    const double c = ctx.predictions.max_prob(id);
    if (c < best_conf || (c == best_conf && id < best)) {
      best = id;
      best_conf = c;
    }
  }
  return best;
}

const std::vector<std::string>& strategy_names() {
  static const std::vector<std::string> names{"random", "confidence", "galaxy"};
  return names;
}

std::unique_ptr<QueryStrategy> make_strategy(std::string_view name, std::uint64_t seed) {
  if (name == "random") return std::make_unique<RandomStrategy>(seed);
  if (name == "confidence") return std::make_unique<ConfidenceStrategy>();
  if (name == "galaxy") return std::make_unique<GalaxyStrategy>();
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "'; valid strategies: random, confidence, galaxy");
}

BatchResult select_batch(QueryStrategy& strategy, PoolState& pool,
                         const PredictionMatrix& predictions, Oracle& oracle,
                         std::size_t batch_size, std::size_t iteration, std::uint64_t rng_seed) {
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (predictions.rows() != pool.size())
    throw DimensionMismatch(pool.size(), predictions.rows());

  const StrategyContext ctx{pool, predictions, rng_seed, iteration};
  const std::size_t target =
      std::min({batch_size, pool.unlabeled_count(), oracle.budget().remaining()});

  BatchResult result;
  result.labeled.reserve(target);
  for (std::size_t q = 0; q < target; ++q) {
    const SampleId id = strategy.next_query(ctx);
    if (!pool.contains(id)) throw UnknownId(id);
    if (pool.is_labeled(id)) throw AlreadyLabeled(id);
    const QueryReceipt receipt = oracle.query(id, iteration);
    pool.mark_labeled(id, receipt.label, iteration);
    strategy.observe(ctx, id, receipt.label);
    result.labeled.emplace_back(id, receipt.label);
  }
  result.budget_exhausted = oracle.budget().exhausted();
  result.pool_exhausted = pool.unlabeled_count() == 0;
  return result;
}

}  // namespace activelab
