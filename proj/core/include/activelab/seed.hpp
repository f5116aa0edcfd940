#pragma once

#include <cstdint>

namespace activelab {

/// Independent random streams derived from one run seed.
enum class Stream : std::uint64_t {
  Partition = 1,
  SeedBatch = 2,
  Learner = 3,
  Strategy = 4,
  ClassMeans = 5,
  ClassSamples = 6,
  Shuffle = 7,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for `stream` of `base`; distinct streams are statistically unrelated.
std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t index = 0) noexcept;

}  // namespace activelab
