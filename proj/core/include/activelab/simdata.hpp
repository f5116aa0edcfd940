#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "activelab/core.hpp"

namespace activelab {

struct ClassPopulations {
  std::vector<std::size_t> counts;

  /// Per-beam populations of the 34-class FLASH mmWave beam-selection data
  /// (30711 samples; smallest class 8 with 20, largest class 18 with 6882).
  static ClassPopulations flash();

  std::size_t num_classes() const noexcept { return counts.size(); }
  std::size_t total() const noexcept;
  void validate() const;

  friend bool operator==(const ClassPopulations&, const ClassPopulations&) = default;
};

/// "flash" or a comma-separated list of positive counts, e.g. "5,5".
ClassPopulations parse_populations(std::string_view text);

struct GenConfig {
  ClassPopulations populations = ClassPopulations::flash();
  std::size_t dim = 32;
  double separation = 3.0;
  double spread = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const GenConfig&, const GenConfig&) = default;
};

/// Isotropic Gaussian blobs: class means uniform on the sphere of radius
/// `separation`, samples N(mean, spread^2 I). Exactly counts[c] examples of
/// class c, shuffled into a seeded order before ids are assigned.
Dataset generate_synthetic(const GenConfig& config);

struct Partition {
  Dataset train;
  Dataset test;
  std::vector<SampleId> train_origin;  // train id -> id in the source dataset
  std::vector<SampleId> test_origin;
};

/// Draws `per_class_test` examples of every class uniformly into the test
/// set; the rest forms the training pool. Both sides keep source order and
/// get dense ids. Throws ClassTooSmall.
Partition partition(const Dataset& dataset, std::size_t per_class_test, std::uint64_t seed);

/// CSV: header `id,label,f0,...,f{d-1}`, one example per line, shortest
/// round-trip number formatting.
void write_dataset_csv(const Dataset& dataset, std::ostream& out);
/// When `num_classes` is absent K is max label + 1. Ids must be unique
/// non-negative integers; examples are renumbered densely in row order.
/// Throws FormatError with the offending line.
Dataset read_dataset_csv(std::istream& in, std::optional<std::size_t> num_classes = std::nullopt);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path,
                     std::optional<std::size_t> num_classes = std::nullopt);

}  // namespace activelab
