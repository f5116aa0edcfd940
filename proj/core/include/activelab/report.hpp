#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace activelab {

/// Smoothed mean curves of one strategy, read back from harness artifacts.
struct StrategyCurves {
  std::string strategy;
  std::vector<double> labels_acquired;
  std::vector<double> accuracy;
  std::vector<double> min_queries;
};

/// Reads `<in>/manifest.json` and each `<in>/<strategy>/aggregate.csv`, then
/// smooths both mean curves with `window`. Throws IoError when artifacts are
/// missing.
std::vector<StrategyCurves> load_report_curves(const std::filesystem::path& in_dir,
                                               std::size_t window);

/// `strategy,labels_acquired,smoothed_accuracy,smoothed_min_queries`
std::string render_report_csv(const std::vector<StrategyCurves>& curves);

/// Two charts: accuracy and per-class minimum queries against labels acquired.
std::string render_report_svg(const std::vector<StrategyCurves>& curves);

}  // namespace activelab
