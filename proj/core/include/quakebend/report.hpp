#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "quakebend/minkowski.hpp"

namespace qb {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over the raw bytes; stable across platforms, used to stamp every
// artifact with the configuration it came from.
std::uint64_t fnv1a_hash(std::string_view data);
std::string hash_hex(std::uint64_t h);

// Shortest decimal that round-trips to the same double (std::to_chars).
std::string format_double(double x);

// Row-major rows, entries space-separated, one row per line.
std::string format_matrix(const Mat& M);

// Writes the whole file, failing with a configuration error when the path is
// not writable (the output directory is caller input).
void write_file(const std::string& path, std::string_view content);

}  // namespace qb
