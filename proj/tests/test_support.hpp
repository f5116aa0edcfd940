#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "activelab/core.hpp"

namespace activelab::testkit {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("activelab_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Rows drawn from a Dirichlet(1) via normalized exponentials.
inline PredictionMatrix random_predictions(std::size_t rows, std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(rows * k);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < k; ++c) s += v[r * k + c] = e(rng);
    for (std::size_t c = 0; c < k; ++c) v[r * k + c] /= s;
  }
  return PredictionMatrix(rows, k, std::move(v));
}

}  // namespace activelab::testkit
