#include "activelab/artifacts.hpp"

#include <sstream>
#include <string_view>

#include "activelab/error.hpp"
#include "activelab/format.hpp"

namespace activelab {

using nlohmann::json;

void write_run_csv(std::ostream& out, const RunResult& run) {
  out << "iteration,labels_acquired,test_accuracy,per_class_min_queries,cumulative_flops\n";
  for (const auto& r : run.iterations) {
    out << r.iteration << ',' << r.labels_acquired << ',' << format_double(r.test_accuracy) << ','
        << r.per_class_min_queries << ',' << format_double(r.cumulative_flops) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const AggregateResult& agg) {
  out << "labels_acquired,mean_accuracy,stderr_accuracy,mean_min_queries\n";
  for (std::size_t i = 0; i < agg.labels_acquired.size(); ++i) {
    out << agg.labels_acquired[i] << ',' << format_double(agg.mean_accuracy[i]) << ','
        << format_double(agg.stderr_accuracy[i]) << ',' << format_double(agg.mean_min_queries[i])
        << '\n';
  }
}

AggregateCurves read_aggregate_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) ||
      line != "labels_acquired,mean_accuracy,stderr_accuracy,mean_min_queries")
    throw FormatError(1, "not an aggregate curve file");
  AggregateCurves c;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    double v[4];
    std::size_t start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = f < 3 ? line.find(',', start) : line.size();
      if (comma == std::string::npos) throw FormatError(line_no, "expected 4 fields");
      if (!parse_double(std::string_view(line).substr(start, comma - start), v[f]))
        throw FormatError(line_no, "invalid number");
      start = comma + 1;
    }
    c.labels_acquired.push_back(v[0]);
    c.mean_accuracy.push_back(v[1]);
    c.stderr_accuracy.push_back(v[2]);
    c.mean_min_queries.push_back(v[3]);
  }
  return c;
}

json model_to_json(const Model& model) {
  return {{"kind", std::string(to_string(model.config().kind))},
          {"K", model.num_classes()},
          {"d", model.dim()},
          {"hidden_units",
           model.config().kind == ModelKind::Mlp1Hidden ? model.config().hidden_units : 0},
          {"parameters", std::vector<double>(model.parameters().begin(), model.parameters().end())}};
}

Model model_from_json(const json& j) {
  try {
    LearnerConfig config;
    config.kind = parse_model_kind(j.at("kind").get<std::string>());
    if (config.kind == ModelKind::Mlp1Hidden) config.hidden_units = j.at("hidden_units").get<std::size_t>();
    return Model(config, j.at("K").get<std::size_t>(), j.at("d").get<std::size_t>(),
                 j.at("parameters").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw FormatError(0, std::string("malformed model: ") + e.what());
  }
}

json run_to_json(const RunResult& run) {
  json iterations = json::array();
  for (const auto& r : run.iterations) {
    json diag = json::object();
    for (const auto& [k, v] : r.strategy_diagnostics) diag[k] = v;
    iterations.push_back({{"iteration", r.iteration},
                          {"labels_acquired", r.labels_acquired},
                          {"test_accuracy", r.test_accuracy},
                          {"per_class_min_queries", r.per_class_min_queries},
                          {"cumulative_flops", r.cumulative_flops},
                          {"cumulative_cost", r.cumulative_cost},
                          {"strategy_diagnostics", diag}});
  }
  json out = {{"strategy", run.strategy},
              {"seed", run.seed},
              {"pool_exhausted", run.pool_exhausted},
              {"iterations", iterations}};
  if (run.final_model) out["final_model"] = model_to_json(*run.final_model);
  return out;
}

namespace {

std::string csv_text(auto&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

std::string optional_number(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("not_reached");
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

void write_strategy_outputs(const std::filesystem::path& dir, std::span<const RunResult> runs,
                            const AggregateResult& agg) {
  ensure_dir(dir);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string idx = std::to_string(i);
    write_file_atomic(dir / ("run_" + idx + ".csv"),
                      csv_text([&](std::ostream& o) { write_run_csv(o, runs[i]); }));
    write_file_atomic(dir / ("querylog_" + idx + ".csv"),
                      csv_text([&](std::ostream& o) { write_query_log_csv(o, runs[i].query_log); }));
    write_file_atomic(dir / ("run_" + idx + ".json"), run_to_json(runs[i]).dump(1) + "\n");
  }
  write_file_atomic(dir / "aggregate.csv",
                    csv_text([&](std::ostream& o) { write_aggregate_csv(o, agg); }));
}

void write_comparison_outputs(const std::filesystem::path& out, const Comparison& cmp,
                              const std::string& created_at) {
  ensure_dir(out);
  json strategies = json::array();
  for (std::size_t s = 0; s < cmp.configs.size(); ++s) {
    const std::string& name = cmp.configs[s].strategy;
    write_strategy_outputs(out / name, cmp.runs[s], cmp.aggregates[s]);
    strategies.push_back(name);
  }
  write_file_atomic(out / "manifest.json",
                    json{{"schema_version", 1}, {"strategies", strategies}}.dump(1) + "\n");

  if (cmp.configs.size() > 1) {
    std::ostringstream joint;
    joint << "strategy,labels_acquired,mean_accuracy,stderr_accuracy,mean_min_queries\n";
    for (const auto& a : cmp.aggregates) {
      for (std::size_t i = 0; i < a.labels_acquired.size(); ++i)
        joint << a.strategy << ',' << a.labels_acquired[i] << ',' << format_double(a.mean_accuracy[i])
              << ',' << format_double(a.stderr_accuracy[i]) << ','
              << format_double(a.mean_min_queries[i]) << '\n';
    }
    write_file_atomic(out / "comparison.csv", joint.str());

    std::ostringstream red;
    red << "metric,target,strategy,labels,reduction_vs_random_percent\n";
    for (const auto& r : cmp.reductions)
      red << "accuracy:" << r.target_name << ',' << format_double(r.target) << ',' << r.strategy
          << ',' << optional_number(r.labels) << ',' << optional_number(r.reduction_vs_random_percent)
          << '\n';
    for (const auto& d : cmp.diversity)
      red << "min_queries" << ',' << d.threshold << ',' << d.strategy << ','
          << format_double(d.mean_labels) << ',' << optional_number(d.reduction_vs_random_percent)
          << '\n';
    write_file_atomic(out / "reduction.csv", red.str());
  }

  json summary;
  summary["metadata"] = {{"created_at", created_at}};
  summary["config"] = to_json(cmp.configs.front());
  json per_strategy = json::array();
  for (std::size_t s = 0; s < cmp.configs.size(); ++s) {
    const auto& a = cmp.aggregates[s];
    json reach = json::array();
    for (const auto& t : a.labels_to_reach)
      reach.push_back({{"target", t.target},
                       {"labels", t.labels ? json(*t.labels) : json("not_reached")}});
    per_strategy.push_back({{"strategy", a.strategy},
                            {"runs", a.runs},
                            {"labels_to_reach", reach},
                            {"mean_total_flops", a.mean_total_flops},
                            {"mean_total_cost", a.mean_total_cost}});
  }
  summary["strategies"] = per_strategy;
  json reductions = json::array();
  for (const auto& r : cmp.reductions)
    reductions.push_back({{"target_name", r.target_name},
                          {"target", r.target},
                          {"strategy", r.strategy},
                          {"labels", r.labels ? json(*r.labels) : json("not_reached")},
                          {"reduction_vs_random_percent",
                           r.reduction_vs_random_percent ? json(*r.reduction_vs_random_percent)
                                                         : json(nullptr)}});
  summary["labels_to_reach"] = reductions;
  json diversity = json::array();
  for (const auto& d : cmp.diversity)
    diversity.push_back({{"strategy", d.strategy},
                         {"threshold", d.threshold},
                         {"runs_reached", d.runs_reached},
                         {"mean_labels", d.mean_labels},
                         {"reduction_vs_random_percent",
                          d.reduction_vs_random_percent ? json(*d.reduction_vs_random_percent)
                                                        : json(nullptr)}});
  summary["min_queries"] = diversity;
  write_file_atomic(out / "summary.json", summary.dump(1) + "\n");
}

Comparison single_strategy(const ExperimentConfig& config, std::vector<RunResult> runs) {
  Comparison cmp;
  cmp.configs = {config};
  cmp.aggregates = {aggregate(runs, config)};
  for (const auto& t : cmp.aggregates.front().labels_to_reach)
    cmp.reductions.push_back({"configured", t.target, config.strategy, t.labels, std::nullopt});
  cmp.diversity = {min_queries_summary(config.strategy, runs, config.min_queries_target)};
  cmp.runs = {std::move(runs)};
  return cmp;
}

}  // namespace activelab
