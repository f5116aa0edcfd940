#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace activelab {

/// Base of every error raised by the library. The CLI maps these to exit code 2,
/// except ConfigError which is a usage problem (exit code 1).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnknownId : public Error {
 public:
  explicit UnknownId(std::uint64_t id)
      : Error("unknown sample id " + std::to_string(id)), id_(id) {}
  std::uint64_t id() const noexcept { return id_; }

 private:
  std::uint64_t id_;
};

class AlreadyLabeled : public Error {
 public:
  explicit AlreadyLabeled(std::uint64_t id)
      : Error("sample " + std::to_string(id) + " is already labeled"), id_(id) {}
  std::uint64_t id() const noexcept { return id_; }

 private:
  std::uint64_t id_;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(std::size_t max_labels)
      : Error("labeling budget of " + std::to_string(max_labels) + " exhausted") {}
};

class PoolExhausted : public Error {
 public:
  PoolExhausted() : Error("no unlabeled samples remain in the pool") {}
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(actual)) {}
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NoInteriorUnlabeled : public Error {
 public:
  NoInteriorUnlabeled(std::size_t start, std::size_t end)
      : Error("segment (" + std::to_string(start) + "," + std::to_string(end) +
              ") has no unlabeled interior node") {}
};

class ClassTooSmall : public Error {
 public:
  ClassTooSmall(std::size_t class_index, std::size_t members, std::size_t wanted)
      : Error("class " + std::to_string(class_index) + " has " + std::to_string(members) +
              " members, fewer than the " + std::to_string(wanted) + " requested for the test split"),
        class_index_(class_index) {}
  std::size_t class_index() const noexcept { return class_index_; }

 private:
  std::size_t class_index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class GridMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace activelab
