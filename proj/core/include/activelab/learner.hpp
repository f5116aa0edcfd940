#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "activelab/core.hpp"

namespace activelab {

enum class ModelKind { SoftmaxLinear, Mlp1Hidden };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts "softmax-linear" and "mlp-1hidden"; throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view name);

struct LearnerConfig {
  ModelKind kind = ModelKind::SoftmaxLinear;
  std::size_t hidden_units = 32;  // mlp only
  std::size_t epochs = 60;
  double learning_rate = 0.1;
  std::size_t minibatch_size = 64;
  double l2 = 1e-4;
  std::uint64_t init_seed = 0;

  void validate() const;
  friend bool operator==(const LearnerConfig&, const LearnerConfig&) = default;
};

/// Trained classifier: a flat parameter vector plus the architecture that
/// interprets it.
///
/// Layout, row-major:
///   softmax-linear:  W[K x d], b[K]
///   mlp-1hidden:     W1[H x d], b1[H], W2[K x H], b2[K]   (tanh hidden layer)
class Model {
 public:
  Model(LearnerConfig config, std::size_t num_classes, std::size_t dim,
        std::vector<double> parameters);

  static Model zeros(LearnerConfig config, std::size_t num_classes, std::size_t dim);
  static std::size_t parameter_count(const LearnerConfig& config, std::size_t num_classes,
                                     std::size_t dim);

  const LearnerConfig& config() const noexcept { return config_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> parameters() const noexcept { return parameters_; }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  LearnerConfig config_;
  std::size_t num_classes_;
  std::size_t dim_;
  std::vector<double> parameters_;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

/// Mean cross-entropy over `batch` plus (l2 / 2) * ||theta||^2.
LossGradient loss_and_gradient(const Model& model, const LabeledSet& batch);

/// Mini-batch SGD from a fresh initialization. Deterministic in
/// (config, labeled order, seed). Throws DegenerateInput on non-finite
/// features or a diverged fit.
Model train(const LearnerConfig& config, const LabeledSet& labeled, std::size_t num_classes,
            std::uint64_t seed);

ProbVector predict_proba(const Model& model, std::span<const double> features);

/// Predictions for every example of `dataset`, row i for id i.
PredictionMatrix predict_matrix(const Model& model, const Dataset& dataset);

/// Index of the largest entry; ties go to the lowest index.
ClassId argmax(std::span<const double> probs) noexcept;

}  // namespace activelab
