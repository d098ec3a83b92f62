#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexdecline/corpus.hpp"
#include "lexdecline/pairs.hpp"
#include "lexdecline/stats.hpp"

namespace lexdecline {

// CDiv per decade; nullopt where the word has no in-vocabulary contexts or
// no table exists.
std::vector<std::optional<double>> cdiv_series(const std::string& word,
                                               std::span<const ContextTable* const> tables);

struct DiachronicFit {
  std::string word;
  double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;  // const, ln B_t, F_t, t
  double r2 = 0.0;
  std::size_t n_decades = 0;
  bool dropped_log_books = false;  // collinear with the kept regressors, coefficient reported as 0
  bool dropped_frequency = false;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kMinDiachronicDecades = 5;

// OLS of CDiv_t on [1, ln B_t, F_t, t] with t = index + 1 over the decades
// where CDiv is defined. ln B_t and F_t are dropped (in that order of
// preference to keep) when collinear with the others. Throws DataError with
// fewer than min_decades defined points.
DiachronicFit fit_diachronic(const std::string& word, std::span<const std::optional<double>> cdiv,
                             const CorpusMeta& meta, std::span<const double> freq,
                             std::size_t min_decades = kMinDiachronicDecades);

struct Beta3Comparison {
  std::size_t total_pairs = 0;
  std::size_t included_pairs = 0;
  std::size_t excluded_pairs = 0;  // either side without a fit
  std::vector<double> dec_beta3, stb_beta3;  // over included pairs, aligned
  Summary dec, stb;
  WilcoxonResult paired, dec_vs_zero, stb_vs_zero;
};

// fits may hold any words; pairs select and align them.
Beta3Comparison compare_beta3(std::span<const MatchedPair> pairs, std::span<const DiachronicFit> fits);

// word<TAB>set<TAB>beta0<TAB>beta1<TAB>beta2<TAB>beta3<TAB>r2<TAB>n_decades
void write_beta3_table(const std::filesystem::path& path, std::span<const MatchedPair> pairs,
                       std::span<const DiachronicFit> fits, const std::string& header_comment = {});

}  // namespace lexdecline
