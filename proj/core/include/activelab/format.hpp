#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace activelab {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full-string double; returns false on any trailing junk.
bool parse_double(std::string_view text, double& value);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Whole-file read. Throws IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace activelab
