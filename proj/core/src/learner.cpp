#include "activelab/learner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "activelab/error.hpp"
#include "activelab/seed.hpp"

namespace activelab {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMat>;
using RowMap = Eigen::Map<RowMat>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

// Row-wise softmax in place with max-logit subtraction. Returns the summed
// negative log-likelihood of `labels` (empty span: 0).
double softmax_rows(RowMat& z, std::span<const ClassId> labels) {
  double nll = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    const double m = row.maxCoeff();
    const double zy = labels.empty() ? 0.0 : row(labels[static_cast<std::size_t>(i)]) - m;
    row.array() = (row.array() - m).exp();
    const double s = row.sum();
    if (!labels.empty()) nll += std::log(s) - zy;
    row /= s;
  }
  return nll;
}

// Forward/backward passes over a contiguous row-major block. Owns scratch
// buffers so the SGD loop does not allocate.
class Network {
 public:
  Network(const LearnerConfig& config, std::size_t num_classes, std::size_t dim)
      : kind_(config.kind),
        k_(static_cast<Eigen::Index>(num_classes)),
        d_(static_cast<Eigen::Index>(dim)),
        h_(static_cast<Eigen::Index>(config.hidden_units)) {}

  // Probabilities for `rows` samples; result left in probs().
  void forward(const double* theta, const double* x, std::size_t rows) {
    const ConstRowMap xs(x, static_cast<Eigen::Index>(rows), d_);
    logits(theta, xs);
    softmax_rows(z_, {});
  }

  const RowMat& probs() const noexcept { return z_; }

  // Mean cross-entropy plus l2 penalty; writes the gradient into `grad`.
  double loss_grad(const double* theta, const double* x, std::span<const ClassId> labels,
                   double l2, double* grad) {
    const auto rows = static_cast<Eigen::Index>(labels.size());
    const ConstRowMap xs(x, rows, d_);
    logits(theta, xs);
    const double nll = softmax_rows(z_, labels);
    for (Eigen::Index i = 0; i < rows; ++i) z_(i, labels[static_cast<std::size_t>(i)]) -= 1.0;
    z_ /= static_cast<double>(rows);

    if (kind_ == ModelKind::SoftmaxLinear) {
      RowMap gw(grad, k_, d_);
      VecMap gb(grad + k_ * d_, k_);
      gw.noalias() = z_.transpose() * xs;
      gb.noalias() = z_.colwise().sum().transpose();
    } else {
      const ConstRowMap w2(theta + h_ * d_ + h_, k_, h_);
      RowMap gw1(grad, h_, d_);
      VecMap gb1(grad + h_ * d_, h_);
      RowMap gw2(grad + h_ * d_ + h_, k_, h_);
      VecMap gb2(grad + h_ * d_ + h_ + k_ * h_, k_);
      gw2.noalias() = z_.transpose() * hidden_;
      gb2.noalias() = z_.colwise().sum().transpose();
      delta_.noalias() = z_ * w2;
      delta_.array() *= 1.0 - hidden_.array().square();
      gw1.noalias() = delta_.transpose() * xs;
      gb1.noalias() = delta_.colwise().sum().transpose();
    }

    const Eigen::Index n = parameter_count();
    const ConstVecMap th(theta, n);
    VecMap g(grad, n);
    g += l2 * th;
    return nll / static_cast<double>(rows) + 0.5 * l2 * th.squaredNorm();
  }

  Eigen::Index parameter_count() const noexcept {
    return kind_ == ModelKind::SoftmaxLinear ? k_ * d_ + k_ : h_ * d_ + h_ + k_ * h_ + k_;
  }

 private:
  void logits(const double* theta, const ConstRowMap& xs) {
    if (kind_ == ModelKind::SoftmaxLinear) {
      const ConstRowMap w(theta, k_, d_);
      const ConstVecMap b(theta + k_ * d_, k_);
      z_.noalias() = xs * w.transpose();
      z_.rowwise() += b.transpose();
    } else {
      const ConstRowMap w1(theta, h_, d_);
      const ConstVecMap b1(theta + h_ * d_, h_);
      const ConstRowMap w2(theta + h_ * d_ + h_, k_, h_);
      const ConstVecMap b2(theta + h_ * d_ + h_ + k_ * h_, k_);
      hidden_.noalias() = xs * w1.transpose();
      hidden_.rowwise() += b1.transpose();
      hidden_ = hidden_.array().tanh();
      z_.noalias() = hidden_ * w2.transpose();
      z_.rowwise() += b2.transpose();
    }
  }

  ModelKind kind_;
  Eigen::Index k_;
  Eigen::Index d_;
  Eigen::Index h_;
  RowMat z_;
  RowMat hidden_;
  RowMat delta_;
};

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

std::vector<double> initial_parameters(const LearnerConfig& config, std::size_t num_classes,
                                       std::size_t dim, std::uint64_t seed) {
  std::vector<double> theta(Model::parameter_count(config, num_classes, dim), 0.0);
  std::mt19937_64 rng(derive_seed(seed, Stream::Learner, config.init_seed));
  auto fill = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
    const double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-a, a);
    for (std::size_t i = 0; i < count; ++i) theta[offset + i] = u(rng);
  };
  if (config.kind == ModelKind::SoftmaxLinear) {
    fill(0, num_classes * dim, dim);
  } else {
    const std::size_t h = config.hidden_units;
    fill(0, h * dim, dim);
    fill(h * dim + h, num_classes * h, h);
  }
  return theta;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  return kind == ModelKind::SoftmaxLinear ? "softmax-linear" : "mlp-1hidden";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "softmax-linear") return ModelKind::SoftmaxLinear;
  if (name == "mlp-1hidden") return ModelKind::Mlp1Hidden;
  throw ConfigError("unknown learner kind '" + std::string(name) +
                    "' (expected softmax-linear or mlp-1hidden)");
}

void LearnerConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be positive");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (minibatch_size < 1) throw ConfigError("minibatch_size must be at least 1");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be non-negative");
  if (kind == ModelKind::Mlp1Hidden && hidden_units < 1)
    throw ConfigError("hidden_units must be at least 1");
}

Model::Model(LearnerConfig config, std::size_t num_classes, std::size_t dim,
             std::vector<double> parameters)
    : config_(config), num_classes_(num_classes), dim_(dim), parameters_(std::move(parameters)) {
  const std::size_t expected = parameter_count(config_, num_classes_, dim_);
  if (parameters_.size() != expected) throw DimensionMismatch(expected, parameters_.size());
  if (!all_finite(parameters_)) throw DegenerateInput("model parameters must be finite");
}

Model Model::zeros(LearnerConfig config, std::size_t num_classes, std::size_t dim) {
  return {config, num_classes, dim,
          std::vector<double>(parameter_count(config, num_classes, dim), 0.0)};
}

std::size_t Model::parameter_count(const LearnerConfig& config, std::size_t num_classes,
                                   std::size_t dim) {
  if (config.kind == ModelKind::SoftmaxLinear) return num_classes * dim + num_classes;
  const std::size_t h = config.hidden_units;
  return h * dim + h + num_classes * h + num_classes;
}

LossGradient loss_and_gradient(const Model& model, const LabeledSet& batch) {
  if (batch.empty()) throw DegenerateInput("loss requires a non-empty batch");
  if (batch.dim() != model.dim()) throw DimensionMismatch(model.dim(), batch.dim());
  for (ClassId y : batch.labels())
    if (y >= model.num_classes()) throw DegenerateInput("label out of range");
  Network net(model.config(), model.num_classes(), model.dim());
  LossGradient out;
  out.gradient.assign(model.parameters().size(), 0.0);
  out.loss = net.loss_grad(model.parameters().data(), batch.features().data(), batch.labels(),
                           model.config().l2, out.gradient.data());
  return out;
}

Model train(const LearnerConfig& config, const LabeledSet& labeled, std::size_t num_classes,
            std::uint64_t seed) {
  config.validate();
  if (labeled.empty()) throw DegenerateInput("cannot train on an empty labeled set");
  if (!all_finite(labeled.features())) throw DegenerateInput("non-finite feature value");
  for (ClassId y : labeled.labels())
    if (y >= num_classes) throw DegenerateInput("label out of range");

  const std::size_t dim = labeled.dim();
  const std::size_t n = labeled.size();
  const std::size_t batch = std::min(config.minibatch_size, n);

  std::vector<double> theta = initial_parameters(config, num_classes, dim, seed);
  std::vector<double> grad(theta.size());
  Network net(config, num_classes, dim);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> xb(batch * dim);
  std::vector<ClassId> yb(batch);
  std::mt19937_64 shuffle_rng(derive_seed(seed, Stream::Shuffle, config.init_seed));
  const bool full_batch = batch == n;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (!full_batch) std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t rows = std::min(batch, n - start);
      const double* x = labeled.features().data();
      std::span<const ClassId> y = labeled.labels();
      if (!full_batch) {
        for (std::size_t r = 0; r < rows; ++r) {
          const std::size_t src = order[start + r];
          std::copy_n(labeled.row(src).data(), dim, xb.data() + r * dim);
          yb[r] = labeled.label(src);
        }
        x = xb.data();
        y = std::span<const ClassId>(yb.data(), rows);
      }
      net.loss_grad(theta.data(), x, y, config.l2, grad.data());
      for (std::size_t p = 0; p < theta.size(); ++p) theta[p] -= config.learning_rate * grad[p];
    }
  }
  if (!all_finite(theta)) throw DegenerateInput("training diverged to non-finite parameters");
  return {config, num_classes, dim, std::move(theta)};
}

ProbVector predict_proba(const Model& model, std::span<const double> features) {
  if (features.size() != model.dim()) throw DimensionMismatch(model.dim(), features.size());
  Network net(model.config(), model.num_classes(), model.dim());
  net.forward(model.parameters().data(), features.data(), 1);
  const auto& p = net.probs();
  return ProbVector(p.data(), p.data() + p.cols());
}

PredictionMatrix predict_matrix(const Model& model, const Dataset& dataset) {
  if (dataset.dim() != model.dim()) throw DimensionMismatch(model.dim(), dataset.dim());
  constexpr std::size_t kChunk = 4096;
  const std::size_t n = dataset.size();
  const std::size_t k = model.num_classes();
  const std::size_t d = model.dim();
  std::vector<double> values(n * k);
  std::vector<double> x;
  Network net(model.config(), k, d);
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t rows = std::min(kChunk, n - start);
    x.resize(rows * d);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto& f = dataset[static_cast<SampleId>(start + r)].features;
      std::copy(f.begin(), f.end(), x.begin() + static_cast<std::ptrdiff_t>(r * d));
    }
    net.forward(model.parameters().data(), x.data(), rows);
    std::copy_n(net.probs().data(), rows * k, values.begin() + static_cast<std::ptrdiff_t>(start * k));
  }
  return {n, k, std::move(values)};
}

ClassId argmax(std::span<const double> probs) noexcept {
  std::size_t best = 0;
  for (std::size_t c = 1; c < probs.size(); ++c)
    if (probs[c] > probs[best]) best = c;
  return static_cast<ClassId>(best);
}

}  // namespace activelab
