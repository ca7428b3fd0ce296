#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace apifrag {

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// 64-bit FNV-1a. Stable across platforms, used for cache keys and report
/// snapshots, not for security.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);
/// Hex FNV-1a of a file's bytes, or "missing" if it does not exist.
std::string file_hash(const std::filesystem::path& path);

std::string trim(std::string_view s);

}  // namespace apifrag
