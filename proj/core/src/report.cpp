#include "activelab/report.hpp"

#include <fstream>
#include <sstream>

#include "activelab/artifacts.hpp"
#include "activelab/config.hpp"
#include "activelab/error.hpp"
#include "activelab/format.hpp"
#include "activelab/harness.hpp"
#include "activelab/svg.hpp"

namespace activelab {

std::vector<StrategyCurves> load_report_curves(const std::filesystem::path& in_dir,
                                               std::size_t window) {
  const auto manifest_path = in_dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path))
    throw IoError("missing artifact: " + manifest_path.string() + " (run or compare output expected)");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("unreadable manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("strategies") || !manifest["strategies"].is_array())
    throw IoError("manifest " + manifest_path.string() + " lists no strategies");

  std::vector<StrategyCurves> out;
  for (const auto& name : manifest["strategies"]) {
    const std::string strategy = name.get<std::string>();
    const auto path = in_dir / strategy / "aggregate.csv";
    std::ifstream in(path);
    if (!in) throw IoError("missing artifact: " + path.string());
    const AggregateCurves agg = read_aggregate_csv(in);
    out.push_back({strategy, agg.labels_acquired, smooth(agg.mean_accuracy, window),
                   smooth(agg.mean_min_queries, window)});
  }
  return out;
}

std::string render_report_csv(const std::vector<StrategyCurves>& curves) {
  std::ostringstream out;
  out << "strategy,labels_acquired,smoothed_accuracy,smoothed_min_queries\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.labels_acquired.size(); ++i)
      out << c.strategy << ',' << format_double(c.labels_acquired[i]) << ','
          << format_double(c.accuracy[i]) << ',' << format_double(c.min_queries[i]) << '\n';
  return out.str();
}

std::string render_report_svg(const std::vector<StrategyCurves>& curves) {
  std::vector<LineChart> charts(2);
  charts[0] = {"Test accuracy", "labels acquired", "test accuracy", {}};
  charts[1] = {"Per-class minimum queries", "labels acquired", "per-class minimum queries", {}};
  for (const auto& c : curves) {
    charts[0].series.push_back({c.strategy, c.labels_acquired, c.accuracy});
    charts[1].series.push_back({c.strategy, c.labels_acquired, c.min_queries});
  }
  return render_svg(charts);
}

}  // namespace activelab
