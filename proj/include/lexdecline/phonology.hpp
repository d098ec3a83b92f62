#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexdecline/error.hpp"

namespace lexdecline {

struct Transcription {
  std::string word;
  std::vector<std::string> phones;
  std::vector<bool> nuclei_mask;
};

class UnknownSymbolError : public DataError {
 public:
  UnknownSymbolError(const std::string& word, const std::string& symbol)
      : DataError("unknown phone symbol '" + symbol + "' in '" + word + "'"), word_(word), symbol_(symbol) {}
  const std::string& word() const { return word_; }
  const std::string& symbol() const { return symbol_; }

 private:
  std::string word_, symbol_;
};

struct PhoneSet {
  std::set<std::string> vowels;
  // When absent, every non-vowel symbol is accepted as a consonant.
  std::optional<std::set<std::string>> consonants;
};

struct PronunciationLexicon {
  std::map<std::string, Transcription> entries;
  std::vector<std::string> warnings;
};

// One symbol per line; blank and `#` lines skipped.
std::set<std::string> load_symbol_set(const std::filesystem::path& path);

// `word<TAB>p1 p2 ...`. Duplicate words keep the last line and add a warning.
PronunciationLexicon load_pronunciations(const std::filesystem::path& path, const PhoneSet& phones);

// Word boundary marker; never a phone in the lexicon.
inline constexpr std::string_view kBoundary = "#";

class PhonemeLM {
 public:
  virtual ~PhonemeLM() = default;
  // Phone symbols plus kBoundary.
  virtual const std::vector<std::string>& inventory() const = 0;
  // ln P(next | prefix), prefix being the phones of the word so far (the
  // start boundary is implicit). Throws UnknownSymbolError for symbols
  // outside the inventory.
  virtual double logprob(const std::string& next, std::span<const std::string> prefix) const = 0;
};

class UniformPhonemeLM : public PhonemeLM {
 public:
  explicit UniformPhonemeLM(std::vector<std::string> phones);
  const std::vector<std::string>& inventory() const override { return inventory_; }
  double logprob(const std::string& next, std::span<const std::string> prefix) const override;

 private:
  std::vector<std::string> inventory_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

// Lidstone-smoothed n-gram over phones, padded with order-1 start
// boundaries and one end boundary.
class NGramPhonemeLM : public PhonemeLM {
 public:
  NGramPhonemeLM(std::vector<std::string> phones, std::size_t order = 3, double alpha = 0.1);

  // Adds `weight` occurrences of the padded sequence.
  void observe(std::span<const std::string> phones, std::uint64_t weight = 1);

  const std::vector<std::string>& inventory() const override { return inventory_; }
  double logprob(const std::string& next, std::span<const std::string> prefix) const override;

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  // Count of `next` after the given history (order-1 symbols, boundary padded).
  std::uint64_t count(std::span<const std::string> history, const std::string& next) const;
  std::uint64_t total_tokens() const { return tokens_; }

  // Canonical text dump of inventory and counts, stable across runs.
  std::string serialize() const;

 private:
  std::uint32_t id(const std::string& symbol, std::string_view word) const;
  std::uint64_t key(std::span<const std::uint32_t> history) const;

  std::size_t order_;
  double alpha_;
  std::vector<std::string> inventory_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::uint32_t boundary_ = 0;
  std::map<std::uint64_t, std::vector<std::uint64_t>> counts_;
  std::uint64_t tokens_ = 0;
};

// Multinomial sample of `sample_size` word tokens by frequency, returned as
// per-word token counts (words absent from either input are ignored).
std::map<std::string, std::uint64_t> sample_tokens(const std::map<std::string, Transcription>& lexicon,
                                                   const std::map<std::string, double>& freqs,
                                                   std::size_t sample_size, std::uint64_t seed);

// Trains the default trigram model on a seeded frequency-weighted sample.
// Throws DataError when lexicon and freqs share no word with positive frequency.
NGramPhonemeLM train_phoneme_lm(const std::map<std::string, Transcription>& lexicon,
                                const std::map<std::string, double>& freqs, std::size_t sample_size = 100000,
                                std::uint64_t seed = 0, double alpha = 0.1);

// Mean next-phone log probability; no end-of-word term.
double phonological_typicality(const Transcription& w, const PhonemeLM& lm);

double normalized_levenshtein(std::span<const std::string> u, std::span<const std::string> v);
double normalized_levenshtein(const Transcription& u, const Transcription& v);

// Sum of exp(-d) over the lexicon, w itself included when present.
double phonological_density(const Transcription& w, std::span<const Transcription> lexicon);

struct Complexity {
  double value = 0.0;
  bool degenerate = false;  // no nuclei
};

// Nuclei per phone.
Complexity phonological_complexity(const Transcription& w);

}  // namespace lexdecline
