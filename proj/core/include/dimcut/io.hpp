#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace dimcut {

/// Writes `contents` to `<path>.tmp` and renames it over `path`, so readers
/// never observe a partially written file. Throws std::runtime_error.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace dimcut
