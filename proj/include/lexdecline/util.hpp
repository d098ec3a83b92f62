#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lexdecline {

std::vector<std::string_view> split(std::string_view s, char sep);
// Splits on runs of spaces/tabs; no empty fields.
std::vector<std::string_view> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

// Field parsers raising ParseError(path, line, ...) on failure.
double parse_double(std::string_view field, const std::string& path, std::size_t line);
long long parse_int(std::string_view field, const std::string& path, std::size_t line);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

// Calls fn(line_number, line) for every line of a text file, with the
// trailing '\r' removed. Throws ParseError if the file cannot be opened.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots; the schedule is not deterministic.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace lexdecline
