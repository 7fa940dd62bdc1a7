#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace reaction_miner {

// ---- text helpers -------------------------------------------------------

std::vector<std::string_view> split(std::string_view s, char sep);

/// Splits into at most `max_fields` fields; the last field keeps any further separators.
std::vector<std::string_view> split_n(std::string_view s, char sep, std::size_t max_fields);

std::string_view trim(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Shortest round-trip representation of a double ("%.17g" trimmed), locale independent.
std::string format_double(double v);

/// Fixed-point rendering with `digits` decimals.
std::string format_fixed(double v, int digits);

// ---- files --------------------------------------------------------------

/// Reads every line (without the trailing newline / CR). Throws IoError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes `content` to `path` atomically enough for our purposes (temp file + rename).
void write_file(const std::filesystem::path& path, std::string_view content);

// ---- threading ----------------------------------------------------------

/// Global worker cap. Resolved from set_thread_cap(), then REACTION_MINER_THREADS,
/// then hardware concurrency.
std::size_t thread_cap();
void set_thread_cap(std::size_t n);

/// Runs fn(begin, end, part) over `parts` contiguous slices of [0, n) and
/// returns once all finished. Slicing depends only on (n, parts), so any
/// reduction done in part order afterwards is deterministic.
void parallel_partitions(std::size_t n, std::size_t parts,
                         const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Number of partitions to use for `n` items with at least `min_chunk` items each.
std::size_t partition_count(std::size_t n, std::size_t min_chunk = 4096);

}  // namespace reaction_miner
