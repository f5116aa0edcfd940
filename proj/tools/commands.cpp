#include "commands.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <ctime>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "activelab/artifacts.hpp"
#include "activelab/config.hpp"
#include "activelab/error.hpp"
#include "activelab/format.hpp"
#include "activelab/harness.hpp"
#include "activelab/report.hpp"
#include "activelab/simdata.hpp"

namespace activelab::cli {
namespace {

namespace fs = std::filesystem;

struct GenerateArgs {
  std::string populations = "flash";
  std::size_t dim = 32;
  double separation = 3.0;
  double spread = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunArgs {
  std::string config;
  std::string out;
  std::size_t jobs = 0;
};

struct ReportArgs {
  std::string in;
  std::string csv;
  std::string svg;
  std::size_t window = 10;
};

std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

fs::path config_dir(const std::string& path) { return fs::absolute(path).parent_path(); }

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GenConfig g;
  g.populations = parse_populations(a.populations);
  g.dim = a.dim;
  g.separation = a.separation;
  g.spread = a.spread;
  g.seed = a.seed;
  g.validate();
  const Dataset ds = generate_synthetic(g);
  save_dataset(ds, a.out);
  const auto hist = ds.class_histogram();
  out << "wrote " << ds.size() << " examples, " << ds.num_classes() << " classes, dim "
      << ds.dim() << " to " << a.out << '\n';
  out << "class histogram:";
  for (std::size_t c = 0; c < hist.size(); ++c) out << ' ' << c << ':' << hist[c];
  out << '\n';
  return kExitOk;
}

void print_summary(const Comparison& cmp, std::ostream& out) {
  for (const auto& a : cmp.aggregates) {
    out << a.strategy << ": " << a.runs << " runs, final mean accuracy "
        << format_double(a.mean_accuracy.empty() ? 0.0 : a.mean_accuracy.back())
        << ", final labels " << (a.labels_acquired.empty() ? 0 : a.labels_acquired.back()) << '\n';
  }
  for (const auto& r : cmp.reductions) {
    out << "labels to reach " << r.target_name << " accuracy " << format_double(r.target) << ": "
        << r.strategy << ' ' << (r.labels ? std::to_string(*r.labels) : "not reached");
    if (r.reduction_vs_random_percent)
      out << " (" << format_double(*r.reduction_vs_random_percent) << "% vs random)";
    out << '\n';
  }
  for (const auto& d : cmp.diversity) {
    out << "labels until every class has " << d.threshold << ": " << d.strategy << ' '
        << format_double(d.mean_labels) << " (" << d.runs_reached << " runs reached)";
    if (d.reduction_vs_random_percent)
      out << " (" << format_double(*d.reduction_vs_random_percent) << "% vs random)";
    out << '\n';
  }
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const ExperimentConfig config =
      parse_experiment_config(read_json_file(a.config), config_dir(a.config));
  const Dataset dataset = materialize_data(config);
  auto runs = run_all(config, dataset, resolve_jobs(a.jobs));
  const Comparison cmp = single_strategy(config, std::move(runs));
  write_comparison_outputs(a.out, cmp, utc_timestamp());
  print_summary(cmp, out);
  out << "artifacts written to " << a.out << '\n';
  return kExitOk;
}

int cmd_compare(const RunArgs& a, std::ostream& out) {
  const auto configs = parse_compare_config(read_json_file(a.config), config_dir(a.config));
  validate_comparable(configs);
  const Comparison cmp = compare(configs, resolve_jobs(a.jobs));
  write_comparison_outputs(a.out, cmp, utc_timestamp());
  print_summary(cmp, out);
  out << "artifacts written to " << a.out << '\n';
  return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out) {
  if (a.window < 1) throw ConfigError("--window must be at least 1");
  const auto curves = load_report_curves(a.in, a.window);
  if (!a.csv.empty()) write_file_atomic(a.csv, render_report_csv(curves));
  if (!a.svg.empty()) write_file_atomic(a.svg, render_report_svg(curves));
  out << "report over " << curves.size() << " strategies";
  if (!a.csv.empty()) out << ", csv " << a.csv;
  if (!a.svg.empty()) out << ", svg " << a.svg;
  out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pool-based active learning benchmark harness", "activelab"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic Gaussian-blob dataset as CSV");
  generate->add_option("--populations", gen.populations, "\"flash\" or comma-separated class counts")
      ->capture_default_str();
  generate->add_option("--dim", gen.dim, "Feature dimension")->capture_default_str();
  generate->add_option("--separation", gen.separation, "Radius of the class means")
      ->capture_default_str();
  generate->add_option("--spread", gen.spread, "Per-class standard deviation")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--out", gen.out, "Output CSV path")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one strategy as described by a config file");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--jobs", run.jobs, "Parallel runs (0: one per hardware thread)");

  RunArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Run several strategies on matched seeds");
  compare_cmd->add_option("--config", cmp.config, "Compare config (JSON)")->required();
  compare_cmd->add_option("--out", cmp.out, "Output directory")->required();
  compare_cmd->add_option("--jobs", cmp.jobs, "Parallel runs (0: one per hardware thread)");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Smoothed curves from run or compare output");
  report->add_option("--in", rep.in, "Directory written by run or compare")->required();
  report->add_option("--csv", rep.csv, "Output CSV path");
  report->add_option("--svg", rep.svg, "Output SVG path");
  report->add_option("--window", rep.window, "Smoothing window")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (report->parsed() && rep.csv.empty() && rep.svg.empty())
      throw CLI::ValidationError("report", "at least one of --csv and --svg is required");
  } catch (const CLI::CallForHelp&) {
    out << app.help(argc > 1 && app.get_subcommands().size() == 1
                        ? app.get_subcommands().front()->get_name()
                        : "");
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (compare_cmd->parsed()) return cmd_compare(cmp, out);
    return cmd_report(rep, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace activelab::cli
