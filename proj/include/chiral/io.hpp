#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chiral {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_double(double value);

// Write via a temp file in the same directory, then rename into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// Minimal CSV splitter for the plain numeric tables this project writes
// (no quoting or embedded separators).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace chiral
