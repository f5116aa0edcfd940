#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace activelab {

using SampleId = std::uint32_t;
using ClassId = std::uint32_t;

/// One pool or test sample. `true_label` is only read by the oracle and by
/// test-set evaluation; strategies never see an Example.
struct Example {
  SampleId id = 0;
  std::vector<double> features;
  ClassId true_label = 0;

  friend bool operator==(const Example&, const Example&) = default;
};

/// Ordered collection of examples with dense ids: examples[i].id == i.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t num_classes, std::size_t dim, std::vector<Example> examples);

  std::size_t size() const noexcept { return examples_.size(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t dim() const noexcept { return dim_; }

  const Example& operator[](SampleId id) const { return examples_[id]; }
  std::span<const Example> examples() const noexcept { return examples_; }

  std::vector<ClassId> labels() const;
  std::vector<std::size_t> class_histogram() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t num_classes_ = 0;
  std::size_t dim_ = 0;
  std::vector<Example> examples_;
};

/// Dense row-major features with their labels, as consumed by the learner.
class LabeledSet {
 public:
  explicit LabeledSet(std::size_t dim) : dim_(dim) {}

  void add(std::span<const double> features, ClassId label);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  ClassId label(std::size_t i) const { return labels_[i]; }
  std::span<const double> features() const noexcept { return features_; }
  std::span<const ClassId> labels() const noexcept { return labels_; }

 private:
  std::size_t dim_;
  std::vector<double> features_;
  std::vector<ClassId> labels_;
};

using ProbVector = std::vector<double>;

/// True when every entry lies in [0,1] and the entries sum to 1 within `tol`.
bool is_prob_vector(std::span<const double> probs, double tol = 1e-9);

/// Class-probability rows for every pool sample, indexed by sample id.
class PredictionMatrix {
 public:
  PredictionMatrix() = default;
  PredictionMatrix(std::size_t rows, std::size_t num_classes, std::vector<double> values);

  /// Every row equal to 1/K.
  static PredictionMatrix uniform(std::size_t rows, std::size_t num_classes);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::span<const double> row(SampleId id) const {
    return {values_.data() + std::size_t{id} * num_classes_, num_classes_};
  }
  double max_prob(SampleId id) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t num_classes_ = 0;
  std::vector<double> values_;
};

struct QueryRecord {
  SampleId id = 0;
  std::size_t iteration = 0;

  friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

/// Partition of the training pool into labeled and unlabeled ids.
///
/// The unlabeled set is kept as a dense vector with swap-removal so that
/// uniform sampling is O(1); its order is a deterministic function of the
/// labeling history.
class PoolState {
 public:
  explicit PoolState(std::size_t pool_size);

  /// Moves `id` to the labeled set. Throws UnknownId or AlreadyLabeled.
  void mark_labeled(SampleId id, ClassId label, std::size_t iteration);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t labeled_count() const noexcept { return log_.size(); }
  std::size_t unlabeled_count() const noexcept { return unlabeled_.size(); }
  bool contains(SampleId id) const noexcept { return id < labels_.size(); }
  bool is_labeled(SampleId id) const { return labels_.at(id) != kUnlabeled; }
  std::optional<ClassId> label_of(SampleId id) const;

  std::span<const SampleId> unlabeled() const noexcept { return unlabeled_; }
  /// Labeled ids in query order.
  std::span<const QueryRecord> query_log() const noexcept { return log_; }

  /// Checks the partition invariants; used by tests and debug assertions.
  bool consistent() const;

 private:
  static constexpr std::int64_t kUnlabeled = -1;

  std::vector<std::int64_t> labels_;
  std::vector<SampleId> unlabeled_;
  std::vector<std::size_t> slot_;  // position of an unlabeled id inside unlabeled_
  std::vector<QueryRecord> log_;
};

/// counts[c] = number of labeled ids whose revealed label is c.
std::vector<std::size_t> per_class_label_counts(const PoolState& pool, std::size_t num_classes);

/// Labeling budget plus cost accounting. FLOPs and monetary cost are
/// computed as used_labels * rate, so there is no accumulated rounding.
class BudgetTracker {
 public:
  BudgetTracker(std::size_t max_labels, double flops_per_query, double unit_cost_per_query);

  std::size_t max_labels() const noexcept { return max_labels_; }
  std::size_t used_labels() const noexcept { return used_; }
  std::size_t remaining() const noexcept { return max_labels_ - used_; }
  bool exhausted() const noexcept { return used_ >= max_labels_; }
  double flops_per_query() const noexcept { return flops_per_query_; }
  double unit_cost_per_query() const noexcept { return unit_cost_per_query_; }

  void charge();

  double flops() const noexcept { return static_cast<double>(used_) * flops_per_query_; }
  double cost() const noexcept { return static_cast<double>(used_) * unit_cost_per_query_; }

 private:
  std::size_t max_labels_;
  std::size_t used_ = 0;
  double flops_per_query_;
  double unit_cost_per_query_;
};

}  // namespace activelab
