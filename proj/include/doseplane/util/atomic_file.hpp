#pragma once

#include <filesystem>
#include <string>

namespace doseplane::util {

/// Writes `content` to a sibling temporary file and renames it over `path`, so readers see
/// either the old or the new file, never a partial one.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Whole-file read; throws std::runtime_error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace doseplane::util
