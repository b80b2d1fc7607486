#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mimic {

// Decimal serialization with 17 significant digits: enough for exact
// double round trips, and identical across implementations that follow
// the same rule.
std::string format_double(double v);

double parse_double(const std::string& s);

// FNV-1a 64-bit over raw bytes; used for dataset/report checksums.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::string to_hex(std::uint64_t v);

std::string read_file(const std::string& path);

// Write via temp file + rename so readers never observe partial files.
void write_file_atomic(const std::string& path, const std::string& contents);

std::uint64_t file_checksum(const std::string& path);

std::vector<std::string> split_ws(const std::string& line);

}  // namespace mimic
