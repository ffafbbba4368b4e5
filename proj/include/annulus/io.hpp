#pragma once

#include <filesystem>
#include <string>

namespace annulus {

/// Shortest decimal text that reads back to the same double ("nan", "inf" for non-finite).
std::string format_number(double v);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// 64-bit FNV-1a digest as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace annulus
