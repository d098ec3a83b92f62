#include "lexdecline/corpus.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "lexdecline/error.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

void DecadeAxis::validate() const {
  if (count < 2) throw ArgumentError("decade axis needs at least 2 decades");
}

CorpusMeta load_meta(const std::filesystem::path& path, const DecadeAxis& axis) {
  axis.validate();
  const std::string p = path.string();
  CorpusMeta meta;
  meta.axis = axis;
  meta.tokens_per_decade.assign(axis.count, 0);
  meta.books_per_decade.assign(axis.count, 0);
  std::vector<bool> seen(axis.count, false);
  std::size_t rows = 0;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (trim(line).empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != 3) throw ParseError(p, n, "expected 3 columns, got " + std::to_string(f.size()));
    const long long decade = parse_int(f[0], p, n);
    const long long tokens = parse_int(f[1], p, n);
    const long long books = parse_int(f[2], p, n);
    ++rows;
    if (decade < 0 || static_cast<std::size_t>(decade) >= axis.count)
      throw ParseError(p, n, "decade index " + std::to_string(decade) + " outside axis of " +
                                 std::to_string(axis.count) + " decades (" + std::to_string(rows) +
                                 " rows)");
    if (tokens <= 0 || books <= 0) throw ParseError(p, n, "token and book totals must be positive");
    const auto d = static_cast<std::size_t>(decade);
    if (seen[d]) throw ParseError(p, n, "duplicate decade index " + std::to_string(decade));
    seen[d] = true;
    meta.tokens_per_decade[d] = static_cast<std::uint64_t>(tokens);
    meta.books_per_decade[d] = static_cast<std::uint64_t>(books);
  });
  if (rows != axis.count)
    throw ParseError(p, 0, "expected " + std::to_string(axis.count) + " decade rows, got " +
                               std::to_string(rows));
  return meta;
}

std::vector<WordSeries> load_frequencies(const std::filesystem::path& path, const CorpusMeta& meta) {
  const std::string p = path.string();
  const std::size_t decades = meta.axis.count;
  if (meta.tokens_per_decade.size() != decades) throw ArgumentError("corpus meta does not match its axis");
  std::map<std::pair<std::string, std::string>, WordSeries> rows;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (f.size() != decades + 2)
      throw ParseError(p, n, "expected " + std::to_string(decades + 2) + " columns, got " +
                                 std::to_string(f.size()));
    WordSeries s;
    s.word = std::string(f[0]);
    s.pos = std::string(f[1]);
    if (s.word.empty() || s.pos.empty()) throw ParseError(p, n, "empty word or pos");
    s.length = utf8_length(s.word);
    s.raw.resize(decades);
    s.rel.resize(decades);
    for (std::size_t t = 0; t < decades; ++t) {
      const long long c = parse_int(f[t + 2], p, n);
      if (c < 0) throw ParseError(p, n, "negative count");
      const auto total = meta.tokens_per_decade[t];
      if (static_cast<std::uint64_t>(c) > total)
        throw ParseError(p, n, "count exceeds the decade token total");
      s.raw[t] = static_cast<std::uint64_t>(c);
      s.rel[t] = static_cast<double>(c) / static_cast<double>(total);
    }
    auto key = std::make_pair(s.word, s.pos);
    if (!rows.emplace(std::move(key), std::move(s)).second)
      throw ParseError(p, n, "duplicate key (" + std::string(f[0]) + ", " + std::string(f[1]) + ")");
  });
  std::vector<WordSeries> out;
  out.reserve(rows.size());
  for (auto& [key, s] : rows) out.push_back(std::move(s));
  return out;
}

std::vector<double> normalize_series(std::span<const double> rel) {
  const double total = std::accumulate(rel.begin(), rel.end(), 0.0);
  if (!(total > 0.0)) throw DataError("cannot normalize an all-zero series");
  std::vector<double> out(rel.size());
  std::transform(rel.begin(), rel.end(), out.begin(), [total](double v) { return v / total; });
  return out;
}

std::vector<double> normalize_series(const WordSeries& s) {
  try {
    return normalize_series(std::span<const double>(s.rel));
  } catch (const DataError&) {
    throw DataError("series for '" + s.word + "' is all zero");
  }
}

ContextTable build_context_table(const std::filesystem::path& tokens_path, std::size_t decade,
                                 const ContextTableOptions& options) {
  if (options.head_exclude >= options.vocab_size)
    throw ArgumentError("head_exclude must be smaller than vocab_size");

  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> words;
  std::vector<std::uint64_t> freq;
  std::vector<std::uint32_t> tokens;
  std::vector<std::size_t> line_start{0};
  for_each_line(tokens_path, [&](std::size_t, std::string_view line) {
    for (auto tok : split_ws(line)) {
      auto [it, fresh] = ids.try_emplace(std::string(tok), static_cast<std::uint32_t>(words.size()));
      if (fresh) {
        words.emplace_back(tok);
        freq.push_back(0);
      }
      ++freq[it->second];
      tokens.push_back(it->second);
    }
    line_start.push_back(tokens.size());
  });

  if (words.size() < options.vocab_size)
    throw DataError(tokens_path.string() + ": only " + std::to_string(words.size()) +
                    " distinct words, context vocabulary needs " + std::to_string(options.vocab_size));

  std::vector<std::uint32_t> order(words.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (freq[a] != freq[b]) return freq[a] > freq[b];
    return words[a] < words[b];
  });

  ContextTable table;
  table.decade = decade;
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> context_of(words.size(), kNone);
  double mass = 0.0;
  for (std::size_t r = options.head_exclude; r < options.vocab_size; ++r) {
    const auto w = order[r];
    context_of[w] = static_cast<std::uint32_t>(table.context_vocab.size());
    table.context_index.emplace(words[w], context_of[w]);
    table.context_vocab.push_back(words[w]);
    table.prior.push_back(static_cast<double>(freq[w]));
    mass += static_cast<double>(freq[w]);
  }
  for (auto& p : table.prior) p /= mass;

  std::vector<bool> is_target(words.size(), !options.targets.has_value());
  if (options.targets) {
    for (const auto& t : *options.targets) {
      if (auto it = ids.find(t); it != ids.end()) is_target[it->second] = true;
    }
  }

  std::unordered_map<std::uint32_t, std::unordered_map<std::uint32_t, std::uint64_t>> tally;
  for (std::size_t l = 0; l + 1 < line_start.size(); ++l) {
    const std::size_t begin = line_start[l], end = line_start[l + 1];
    for (std::size_t i = begin; i < end; ++i) {
      const auto w = tokens[i];
      if (!is_target[w]) continue;
      if (i > begin && context_of[tokens[i - 1]] != kNone) ++tally[w][context_of[tokens[i - 1]]];
      if (i + 1 < end && context_of[tokens[i + 1]] != kNone) ++tally[w][context_of[tokens[i + 1]]];
    }
  }
  for (auto& [w, m] : tally) {
    ContextCounts cc(m.begin(), m.end());
    std::sort(cc.begin(), cc.end());
    table.counts.emplace(words[w], std::move(cc));
  }
  return table;
}

}  // namespace lexdecline
