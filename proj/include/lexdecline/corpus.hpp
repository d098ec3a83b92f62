#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lexdecline {

// Decade bins starting at start_year. Index t in [0, count); models that use
// a 1-based decade counter use t + 1.
struct DecadeAxis {
  int start_year = 1800;
  std::size_t count = 21;

  int end_year() const { return start_year + 10 * static_cast<int>(count); }
  int year_of(std::size_t index) const { return start_year + 10 * static_cast<int>(index); }
  void validate() const;
};

struct WordSeries {
  std::string word;
  std::string pos;
  std::size_t length = 0;  // code points
  std::vector<std::uint64_t> raw;
  std::vector<double> rel;

  double initial_rel() const { return rel.empty() ? 0.0 : rel.front(); }
};

struct CorpusMeta {
  DecadeAxis axis;
  std::vector<std::uint64_t> tokens_per_decade;
  std::vector<std::uint64_t> books_per_decade;
};

// Meta TSV: decade_index<TAB>token_total<TAB>book_total, one row per decade.
CorpusMeta load_meta(const std::filesystem::path& path, const DecadeAxis& axis = {});

// Frequency TSV: word<TAB>pos<TAB>count_d0<TAB>...<TAB>count_d{n-1}; '#' lines
// skipped. Relative frequencies use the decade token totals from meta.
// Result is sorted by (word, pos).
std::vector<WordSeries> load_frequencies(const std::filesystem::path& path, const CorpusMeta& meta);

// Divides a series by its total mass. Throws DataError for an all-zero series.
std::vector<double> normalize_series(std::span<const double> rel);
std::vector<double> normalize_series(const WordSeries& s);

using ContextCounts = std::vector<std::pair<std::uint32_t, std::uint64_t>>;  // (context id, count), sorted

// Co-occurrence counts for one decade over a +-1 token window.
struct ContextTable {
  std::size_t decade = 0;
  std::vector<std::string> context_vocab;  // frequency-rank order
  std::unordered_map<std::string, std::uint32_t> context_index;
  std::vector<double> prior;  // P(c), parallel to context_vocab
  std::unordered_map<std::string, ContextCounts> counts;

  const ContextCounts* find(const std::string& word) const {
    auto it = counts.find(word);
    return it == counts.end() ? nullptr : &it->second;
  }
};

struct ContextTableOptions {
  std::size_t vocab_size = 10000;
  std::size_t head_exclude = 100;
  // When set, only these words get co-occurrence tallies.
  std::optional<std::unordered_set<std::string>> targets;
};

// Builds the context table from a whitespace-tokenized file, one sentence per
// line. Context words are the frequency ranks (head_exclude, vocab_size],
// ties broken by word; windows never cross lines.
ContextTable build_context_table(const std::filesystem::path& tokens_path, std::size_t decade,
                                 const ContextTableOptions& options = {});

}  // namespace lexdecline
