#include "activelab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include "activelab/error.hpp"
#include "activelab/seed.hpp"
#include "activelab/simdata.hpp"

namespace activelab {
namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
// exception is rethrown after all workers stop.
template <typename Task>
void parallel_for(std::size_t count, std::size_t jobs, Task task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

LabeledSet labeled_training_set(const Dataset& train, const PoolState& pool) {
  LabeledSet set(train.dim());
  for (const auto& q : pool.query_log()) set.add(train[q.id].features, *pool.label_of(q.id));
  return set;
}

void check_disjoint(const Partition& part) {
  std::vector<SampleId> a = part.train_origin;
  std::vector<SampleId> b = part.test_origin;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<SampleId> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  if (!common.empty()) throw DegenerateInput("test examples leaked into the training pool");
}

}  // namespace

Dataset materialize_data(const ExperimentConfig& config) {
  if (const auto* g = std::get_if<GenConfig>(&config.data)) return generate_synthetic(*g);
  const auto& f = std::get<DatasetFile>(config.data);
  return load_dataset(f.path, f.num_classes);
}

std::uint64_t run_seed(const ExperimentConfig& config, std::size_t run_index) noexcept {
  return config.base_seed + run_index;
}

RunResult run_experiment(const ExperimentConfig& config, std::uint64_t seed,
                         const RunHooks& hooks) {
  return run_experiment(config, materialize_data(config), seed, hooks);
}

RunResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                         std::uint64_t seed, const RunHooks& hooks) {
  config.validate();
  const Partition part = partition(dataset, config.per_class_test, derive_seed(seed, Stream::Partition));
  check_disjoint(part);
  const Dataset& pool_set = part.train;
  const Dataset& test = part.test;
  const std::size_t k = dataset.num_classes();

  PoolState pool(pool_set.size());
  Oracle oracle(pool_set.labels(), config.oracle, config.budget);
  RandomStrategy seed_batch(derive_seed(seed, Stream::SeedBatch));
  auto strategy = make_strategy(config.strategy, derive_seed(seed, Stream::Strategy));
  const std::uint64_t learner_seed = derive_seed(seed, Stream::Learner);
  const std::uint64_t strategy_seed = derive_seed(seed, Stream::Strategy, 1);

  RunResult result;
  result.strategy = config.strategy;
  result.seed = seed;

  PredictionMatrix predictions = PredictionMatrix::uniform(pool_set.size(), k);
  for (std::size_t iteration = 1;; ++iteration) {
    BatchResult batch;
    Diagnostics diagnostics;
    if (iteration == 1) {
      batch = select_batch(seed_batch, pool, predictions, oracle, config.batch_size, iteration,
                           strategy_seed);
    } else {
      strategy->begin_iteration({pool, predictions, strategy_seed, iteration});
      batch = select_batch(*strategy, pool, predictions, oracle, config.batch_size, iteration,
                           strategy_seed);
      diagnostics = strategy->diagnostics();
    }
    if (batch.labeled.empty()) break;

    Model model = train(config.learner, labeled_training_set(pool_set, pool), k, learner_seed);
    IterationRecord rec;
    rec.iteration = iteration;
    rec.labels_acquired = pool.labeled_count();
    rec.test_accuracy = accuracy(model, test);
    rec.per_class_min_queries = per_class_min_queries(pool, k);
    rec.cumulative_flops = oracle.budget().flops();
    rec.cumulative_cost = oracle.budget().cost();
    rec.strategy_diagnostics = std::move(diagnostics);
    result.iterations.push_back(std::move(rec));
    if (hooks.on_iteration_end) hooks.on_iteration_end(iteration, pool);

    if (batch.terminal()) {
      result.pool_exhausted = batch.pool_exhausted;
      result.final_model = std::move(model);
      break;
    }
    predictions = predict_matrix(model, pool_set);
    if (predictions.rows() != pool.size()) throw DimensionMismatch(pool.size(), predictions.rows());
    if (hooks.on_predictions) hooks.on_predictions(iteration + 1, predictions);
  }
  result.query_log.assign(oracle.log().begin(), oracle.log().end());
  return result;
}

double accuracy(const Model& model, const Dataset& test) {
  if (test.size() == 0) throw DegenerateInput("accuracy needs a non-empty test set");
  const PredictionMatrix p = predict_matrix(model, test);
  std::size_t correct = 0;
  for (const auto& e : test.examples())
    if (argmax(p.row(e.id)) == e.true_label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::size_t per_class_min_queries(const PoolState& pool, std::size_t num_classes) {
  const auto counts = per_class_label_counts(pool, num_classes);
  return counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
}

std::vector<double> smooth(std::span<const double> curve, std::size_t window) {
  if (window < 1) throw ConfigError("smoothing window must be at least 1");
  const std::size_t n = curve.size();
  const std::size_t back = (window - 1) / 2;
  const std::size_t ahead = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= back ? i - back : 0;
    const std::size_t hi = std::min(n - 1, i + ahead);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += curve[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::optional<std::size_t> labels_to_reach(std::span<const std::size_t> labels,
                                           std::span<const double> curve, double target) {
  for (std::size_t i = 0; i < std::min(labels.size(), curve.size()); ++i)
    if (curve[i] >= target) return labels[i];
  return std::nullopt;
}

std::optional<std::size_t> labels_to_min_queries(const RunResult& run, std::size_t threshold) {
  for (const auto& rec : run.iterations)
    if (rec.per_class_min_queries >= threshold) return rec.labels_acquired;
  return std::nullopt;
}

AggregateResult aggregate(std::span<const RunResult> results, const ExperimentConfig& config) {
  if (results.empty()) throw DegenerateInput("nothing to aggregate");
  AggregateResult agg;
  agg.strategy = results.front().strategy;
  agg.runs = results.size();
  for (const auto& rec : results.front().iterations) agg.labels_acquired.push_back(rec.labels_acquired);
  const std::size_t points = agg.labels_acquired.size();
  for (const auto& r : results) {
    if (r.iterations.size() != points)
      throw GridMismatch("runs differ in iteration count (" + std::to_string(points) + " vs " +
                         std::to_string(r.iterations.size()) + ")");
    for (std::size_t i = 0; i < points; ++i)
      if (r.iterations[i].labels_acquired != agg.labels_acquired[i])
        throw GridMismatch("runs differ in labels_acquired at iteration " + std::to_string(i + 1));
  }

  const auto n = static_cast<double>(results.size());
  agg.mean_accuracy.resize(points);
  agg.stderr_accuracy.resize(points);
  agg.mean_min_queries.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    double acc = 0.0;
    double mq = 0.0;
    for (const auto& r : results) {
      acc += r.iterations[i].test_accuracy;
      mq += static_cast<double>(r.iterations[i].per_class_min_queries);
    }
    const double mean = acc / n;
    double ss = 0.0;
    for (const auto& r : results) ss += (r.iterations[i].test_accuracy - mean) * (r.iterations[i].test_accuracy - mean);
    agg.mean_accuracy[i] = mean;
    agg.stderr_accuracy[i] = results.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    agg.mean_min_queries[i] = mq / n;
  }
  agg.smoothed_accuracy = smooth(agg.mean_accuracy, config.smoothing_window);
  for (double t : config.accuracy_targets)
    agg.labels_to_reach.push_back({t, labels_to_reach(agg.labels_acquired, agg.smoothed_accuracy, t)});

  for (const auto& r : results) {
    if (r.iterations.empty()) continue;
    agg.mean_total_flops += r.iterations.back().cumulative_flops / n;
    agg.mean_total_cost += r.iterations.back().cumulative_cost / n;
  }
  return agg;
}

std::vector<RunResult> run_all(const ExperimentConfig& config, const Dataset& dataset,
                               std::size_t jobs, const RunHooks& hooks) {
  std::vector<RunResult> out(config.runs);
  parallel_for(config.runs, jobs, [&](std::size_t r) {
    out[r] = run_experiment(config, dataset, run_seed(config, r), hooks);
  });
  return out;
}

DiversityRow min_queries_summary(const std::string& strategy, std::span<const RunResult> runs,
                                 std::size_t threshold) {
  DiversityRow row;
  row.strategy = strategy;
  row.threshold = threshold;
  double sum = 0.0;
  for (const auto& r : runs) {
    const auto reached = labels_to_min_queries(r, threshold);
    if (reached) ++row.runs_reached;
    sum += static_cast<double>(
        reached.value_or(r.iterations.empty() ? 0 : r.iterations.back().labels_acquired));
  }
  row.mean_labels = runs.empty() ? 0.0 : sum / static_cast<double>(runs.size());
  return row;
}

void validate_comparable(std::span<const ExperimentConfig> configs) {
  if (configs.size() < 2) throw ConfigError("compare needs at least two strategies");
  std::set<std::string> names;
  for (const auto& c : configs)
    if (!names.insert(c.strategy).second)
      throw ConfigError("duplicate strategy '" + c.strategy + "' in compare config");
  const ExperimentConfig& first = configs.front();
  for (const auto& c : configs.subspan(1)) {
    if (c.budget != first.budget || c.batch_size != first.batch_size)
      throw GridMismatch("strategies '" + first.strategy + "' and '" + c.strategy +
                         "' use different budgets or batch sizes");
    ExperimentConfig same = c;
    same.strategy = first.strategy;
    if (!(same == first))
      throw ConfigError("strategy configs for '" + first.strategy + "' and '" + c.strategy +
                        "' differ in more than the strategy name");
  }
}

Comparison compare(std::span<const ExperimentConfig> configs, std::size_t jobs,
                   const RunHooks& hooks) {
  validate_comparable(configs);
  for (const auto& c : configs) c.validate();
  const Dataset dataset = materialize_data(configs.front());

  Comparison cmp;
  cmp.configs.assign(configs.begin(), configs.end());
  const std::size_t runs = configs.front().runs;
  cmp.runs.assign(configs.size(), std::vector<RunResult>(runs));
  parallel_for(configs.size() * runs, jobs, [&](std::size_t task) {
    const std::size_t s = task / runs;
    const std::size_t r = task % runs;
    cmp.runs[s][r] = run_experiment(configs[s], dataset, run_seed(configs[s], r), hooks);
  });
  for (std::size_t s = 0; s < configs.size(); ++s)
    cmp.aggregates.push_back(aggregate(cmp.runs[s], configs[s]));

  const AggregateResult* random = nullptr;
  for (const auto& a : cmp.aggregates)
    if (a.strategy == "random") random = &a;

  std::vector<std::pair<std::string, double>> targets;
  if (random && !random->smoothed_accuracy.empty())
    targets.emplace_back("mid-range", 0.95 * random->smoothed_accuracy.back());
  for (double t : configs.front().accuracy_targets) targets.emplace_back("configured", t);

  for (const auto& [name, target] : targets) {
    std::optional<std::size_t> random_labels;
    if (random) random_labels = labels_to_reach(random->labels_acquired, random->smoothed_accuracy, target);
    for (const auto& a : cmp.aggregates) {
      ReductionRow row{name, target, a.strategy,
                       labels_to_reach(a.labels_acquired, a.smoothed_accuracy, target), std::nullopt};
      if (row.labels && random_labels && *random_labels > 0)
        row.reduction_vs_random_percent =
            100.0 * (1.0 - static_cast<double>(*row.labels) / static_cast<double>(*random_labels));
      cmp.reductions.push_back(std::move(row));
    }
  }

  for (std::size_t s = 0; s < configs.size(); ++s)
    cmp.diversity.push_back(
        min_queries_summary(configs[s].strategy, cmp.runs[s], configs.front().min_queries_target));
  const DiversityRow* random_div = nullptr;
  for (const auto& d : cmp.diversity)
    if (d.strategy == "random") random_div = &d;
  if (random_div && random_div->mean_labels > 0.0) {
    const double base = random_div->mean_labels;
    for (auto& d : cmp.diversity) d.reduction_vs_random_percent = 100.0 * (1.0 - d.mean_labels / base);
  }
  return cmp;
}

}  // namespace activelab
