#include "lexdecline/phonology.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lexdecline/rng.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

std::set<std::string> load_symbol_set(const std::filesystem::path& path) {
  std::set<std::string> out;
  for_each_line(path, [&](std::size_t, std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    out.emplace(line);
  });
  return out;
}

PronunciationLexicon load_pronunciations(const std::filesystem::path& path, const PhoneSet& phones) {
  const std::string p = path.string();
  PronunciationLexicon lex;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(p, n, "expected word<TAB>phones");
    Transcription t;
    t.word = std::string(trim(line.substr(0, tab)));
    if (t.word.empty()) throw ParseError(p, n, "empty word");
    for (auto f : split_ws(line.substr(tab + 1))) {
      std::string sym(f);
      if (sym == kBoundary) throw ParseError(p, n, "'" + sym + "' is reserved for the word boundary");
      const bool vowel = phones.vowels.count(sym) > 0;
      if (!vowel && phones.consonants && !phones.consonants->count(sym)) throw UnknownSymbolError(t.word, sym);
      t.phones.push_back(std::move(sym));
      t.nuclei_mask.push_back(vowel);
    }
    if (t.phones.empty()) throw ParseError(p, n, "empty transcription for '" + t.word + "'");
    auto [it, fresh] = lex.entries.insert_or_assign(t.word, t);
    if (!fresh) lex.warnings.push_back(p + ":" + std::to_string(n) + ": duplicate entry for '" + t.word + "', keeping the last");
  });
  return lex;
}

namespace {

std::vector<std::string> with_boundary(std::vector<std::string> phones) {
  std::sort(phones.begin(), phones.end());
  phones.erase(std::unique(phones.begin(), phones.end()), phones.end());
  if (std::binary_search(phones.begin(), phones.end(), std::string(kBoundary)))
    throw ArgumentError("phone inventory must not contain the boundary symbol");
  phones.insert(phones.begin(), std::string(kBoundary));
  return phones;
}

}  // namespace

UniformPhonemeLM::UniformPhonemeLM(std::vector<std::string> phones) : inventory_(with_boundary(std::move(phones))) {
  for (std::uint32_t i = 0; i < inventory_.size(); ++i) ids_.emplace(inventory_[i], i);
}

double UniformPhonemeLM::logprob(const std::string& next, std::span<const std::string> prefix) const {
  if (!ids_.count(next)) throw UnknownSymbolError("<query>", next);
  for (const auto& s : prefix)
    if (!ids_.count(s)) throw UnknownSymbolError("<query>", s);
  return -std::log(static_cast<double>(inventory_.size()));
}

NGramPhonemeLM::NGramPhonemeLM(std::vector<std::string> phones, std::size_t order, double alpha)
    : order_(order), alpha_(alpha), inventory_(with_boundary(std::move(phones))) {
  if (order_ < 1 || order_ > 5) throw ArgumentError("n-gram order must be in [1, 5]");
  if (!(alpha_ > 0.0)) throw ArgumentError("smoothing constant must be positive");
  if (inventory_.size() >= 0xFFFF) throw ArgumentError("phone inventory too large");
  for (std::uint32_t i = 0; i < inventory_.size(); ++i) ids_.emplace(inventory_[i], i);
  boundary_ = ids_.at(std::string(kBoundary));
}

std::uint32_t NGramPhonemeLM::id(const std::string& symbol, std::string_view word) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end()) throw UnknownSymbolError(std::string(word), symbol);
  return it->second;
}

std::uint64_t NGramPhonemeLM::key(std::span<const std::uint32_t> history) const {
  std::uint64_t k = 0;
  for (auto h : history) k = (k << 16) | h;
  return k;
}

void NGramPhonemeLM::observe(std::span<const std::string> phones, std::uint64_t weight) {
  if (weight == 0) return;
  const std::size_t h = order_ - 1;
  std::vector<std::uint32_t> seq(h, boundary_);
  for (const auto& s : phones) {
    const auto i = id(s, "<training>");
    if (i == boundary_) throw ArgumentError("boundary symbol inside a training sequence");
    seq.push_back(i);
  }
  seq.push_back(boundary_);
  for (std::size_t pos = h; pos < seq.size(); ++pos) {
    auto& row = counts_[key(std::span(seq).subspan(pos - h, h))];
    if (row.empty()) row.assign(inventory_.size(), 0);
    row[seq[pos]] += weight;
    tokens_ += weight;
  }
}

double NGramPhonemeLM::logprob(const std::string& next, std::span<const std::string> prefix) const {
  const std::size_t h = order_ - 1;
  std::vector<std::uint32_t> hist(h, boundary_);
  for (const auto& s : prefix) hist.push_back(id(s, "<query>"));
  const auto target = id(next, "<query>");
  const auto k = key(std::span(hist).last(h));
  const double v = static_cast<double>(inventory_.size());
  auto it = counts_.find(k);
  if (it == counts_.end()) return -std::log(v);
  std::uint64_t total = 0;
  for (auto c : it->second) total += c;
  return std::log((static_cast<double>(it->second[target]) + alpha_) / (static_cast<double>(total) + alpha_ * v));
}

std::uint64_t NGramPhonemeLM::count(std::span<const std::string> history, const std::string& next) const {
  if (history.size() != order_ - 1) throw ArgumentError("history length must equal order - 1");
  std::vector<std::uint32_t> hist;
  for (const auto& s : history) hist.push_back(id(s, "<query>"));
  auto it = counts_.find(key(hist));
  return it == counts_.end() ? 0 : it->second[id(next, "<query>")];
}

std::string NGramPhonemeLM::serialize() const {
  std::ostringstream out;
  out << "order\t" << order_ << "\nalpha\t" << format_double(alpha_) << "\ninventory";
  for (const auto& s : inventory_) out << '\t' << s;
  out << '\n';
  const std::size_t h = order_ - 1;
  for (const auto& [k, row] : counts_) {
    std::vector<std::uint32_t> hist(h);
    auto kk = k;
    for (std::size_t i = h; i-- > 0;) {
      hist[i] = static_cast<std::uint32_t>(kk & 0xFFFF);
      kk >>= 16;
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j]) continue;
      for (auto x : hist) out << inventory_[x] << ' ';
      out << "->\t" << inventory_[j] << '\t' << row[j] << '\n';
    }
  }
  return out.str();
}

std::map<std::string, std::uint64_t> sample_tokens(const std::map<std::string, Transcription>& lexicon,
                                                   const std::map<std::string, double>& freqs,
                                                   std::size_t sample_size, std::uint64_t seed) {
  std::vector<const std::string*> words;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& [w, f] : freqs) {
    if (!(f > 0.0) || !lexicon.count(w)) continue;
    total += f;
    words.push_back(&w);
    cumulative.push_back(total);
  }
  if (words.empty()) throw DataError("no word has both a transcription and a positive frequency");
  Rng rng(seed);
  std::map<std::string, std::uint64_t> out;
  for (std::size_t s = 0; s < sample_size; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++out[*words[static_cast<std::size_t>(it - cumulative.begin())]];
  }
  return out;
}

NGramPhonemeLM train_phoneme_lm(const std::map<std::string, Transcription>& lexicon,
                                const std::map<std::string, double>& freqs, std::size_t sample_size,
                                std::uint64_t seed, double alpha) {
  const auto sample = sample_tokens(lexicon, freqs, sample_size, seed);
  std::vector<std::string> phones;
  for (const auto& [w, t] : lexicon) phones.insert(phones.end(), t.phones.begin(), t.phones.end());
  NGramPhonemeLM lm(std::move(phones), 3, alpha);
  for (const auto& [w, n] : sample) lm.observe(lexicon.at(w).phones, n);
  return lm;
}

double phonological_typicality(const Transcription& w, const PhonemeLM& lm) {
  if (w.phones.empty()) throw DataError("empty transcription for '" + w.word + "'");
  // Extended precision keeps sums of a few dozen terms exact enough that a
  // constant log probability comes back unchanged.
  long double sum = 0.0L;
  const std::span<const std::string> all(w.phones);
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      sum += lm.logprob(all[i], all.first(i));
    } catch (const UnknownSymbolError& e) {
      throw UnknownSymbolError(w.word, e.symbol());
    }
  }
  return static_cast<double>(sum / static_cast<long double>(all.size()));
}

double normalized_levenshtein(std::span<const std::string> u, std::span<const std::string> v) {
  const std::size_t n = u.size(), m = v.size();
  if (n == 0 || m == 0) return n == m ? 0.0 : 1.0;
  std::vector<std::size_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (u[i - 1] == v[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return static_cast<double>(row[m]) / static_cast<double>(std::max(n, m));
}

double normalized_levenshtein(const Transcription& u, const Transcription& v) {
  return normalized_levenshtein(u.phones, v.phones);
}

double phonological_density(const Transcription& w, std::span<const Transcription> lexicon) {
  // d <= 1 for every pair, so each term is at least exp(-1) and no pair can be skipped.
  double sum = 0.0;
  for (const auto& v : lexicon) sum += std::exp(-normalized_levenshtein(w.phones, v.phones));
  return sum;
}

Complexity phonological_complexity(const Transcription& w) {
  if (w.phones.empty()) throw DataError("empty transcription for '" + w.word + "'");
  const auto nuclei = std::count(w.nuclei_mask.begin(), w.nuclei_mask.end(), true);
  return {static_cast<double>(nuclei) / static_cast<double>(w.phones.size()), nuclei == 0};
}

}  // namespace lexdecline
