#include "activelab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "activelab/error.hpp"

namespace activelab {

Dataset::Dataset(std::size_t num_classes, std::size_t dim, std::vector<Example> examples)
    : num_classes_(num_classes), dim_(dim), examples_(std::move(examples)) {
  if (num_classes_ == 0) throw DegenerateInput("dataset needs at least one class");
  if (dim_ == 0) throw DegenerateInput("dataset needs a positive feature dimension");
  if (examples_.empty()) throw DegenerateInput("dataset has no examples");
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const Example& e = examples_[i];
    if (e.id != i) throw DegenerateInput("example ids must be dense; position " + std::to_string(i) +
                                         " carries id " + std::to_string(e.id));
    if (e.features.size() != dim_) throw DimensionMismatch(dim_, e.features.size());
    if (e.true_label >= num_classes_)
      throw DegenerateInput("label " + std::to_string(e.true_label) + " out of range for " +
                            std::to_string(num_classes_) + " classes");
  }
}

std::vector<ClassId> Dataset::labels() const {
  std::vector<ClassId> out;
  out.reserve(examples_.size());
  for (const auto& e : examples_) out.push_back(e.true_label);
  return out;
}

std::vector<std::size_t> Dataset::class_histogram() const {
  std::vector<std::size_t> h(num_classes_, 0);
  for (const auto& e : examples_) ++h[e.true_label];
  return h;
}

void LabeledSet::add(std::span<const double> features, ClassId label) {
  if (features.size() != dim_) throw DimensionMismatch(dim_, features.size());
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(label);
}

bool is_prob_vector(std::span<const double> probs, double tol) {
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= tol;
}

PredictionMatrix::PredictionMatrix(std::size_t rows, std::size_t num_classes,
                                   std::vector<double> values)
    : rows_(rows), num_classes_(num_classes), values_(std::move(values)) {
  if (values_.size() != rows_ * num_classes_)
    throw DimensionMismatch(rows_ * num_classes_, values_.size());
}

PredictionMatrix PredictionMatrix::uniform(std::size_t rows, std::size_t num_classes) {
  return {rows, num_classes,
          std::vector<double>(rows * num_classes, 1.0 / static_cast<double>(num_classes))};
}

double PredictionMatrix::max_prob(SampleId id) const {
  double best = 0.0;
  for (double p : row(id)) best = std::max(best, p);
  return best;
}

PoolState::PoolState(std::size_t pool_size)
    : labels_(pool_size, kUnlabeled), unlabeled_(pool_size), slot_(pool_size) {
  std::iota(unlabeled_.begin(), unlabeled_.end(), SampleId{0});
  std::iota(slot_.begin(), slot_.end(), std::size_t{0});
}

void PoolState::mark_labeled(SampleId id, ClassId label, std::size_t iteration) {
  if (!contains(id)) throw UnknownId(id);
  if (labels_[id] != kUnlabeled) throw AlreadyLabeled(id);
  labels_[id] = label;
  const std::size_t s = slot_[id];
  const SampleId moved = unlabeled_.back();
  unlabeled_[s] = moved;
  slot_[moved] = s;
  unlabeled_.pop_back();
  log_.push_back({id, iteration});
}

std::optional<ClassId> PoolState::label_of(SampleId id) const {
  if (!contains(id)) throw UnknownId(id);
  if (labels_[id] == kUnlabeled) return std::nullopt;
  return static_cast<ClassId>(labels_[id]);
}

bool PoolState::consistent() const {
  if (unlabeled_.size() + log_.size() != labels_.size()) return false;
  std::vector<char> seen(labels_.size(), 0);
  for (std::size_t s = 0; s < unlabeled_.size(); ++s) {
    const SampleId id = unlabeled_[s];
    if (id >= labels_.size() || seen[id] || labels_[id] != kUnlabeled || slot_[id] != s) return false;
    seen[id] = 1;
  }
  for (const auto& q : log_) {
    if (q.id >= labels_.size() || seen[q.id] || labels_[q.id] == kUnlabeled) return false;
    seen[q.id] = 1;
  }
  return true;
}

std::vector<std::size_t> per_class_label_counts(const PoolState& pool, std::size_t num_classes) {
  std::vector<std::size_t> counts(num_classes, 0);
  for (const auto& q : pool.query_log()) {
    const ClassId c = *pool.label_of(q.id);
    if (c >= num_classes)
      throw DegenerateInput("revealed label " + std::to_string(c) + " exceeds class count " +
                            std::to_string(num_classes));
    ++counts[c];
  }
  return counts;
}

BudgetTracker::BudgetTracker(std::size_t max_labels, double flops_per_query,
                             double unit_cost_per_query)
    : max_labels_(max_labels),
      flops_per_query_(flops_per_query),
      unit_cost_per_query_(unit_cost_per_query) {
  if (max_labels_ == 0) throw ConfigError("labeling budget must be positive");
  if (!(flops_per_query_ >= 0.0) || !(unit_cost_per_query_ >= 0.0))
    throw ConfigError("per-query costs must be non-negative");
}

void BudgetTracker::charge() {
  if (exhausted()) throw BudgetExceeded(max_labels_);
  ++used_;
}

}  // namespace activelab
