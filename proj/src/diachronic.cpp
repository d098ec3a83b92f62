#include "lexdecline/diachronic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "lexdecline/distribution.hpp"
#include "lexdecline/error.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

std::vector<std::optional<double>> cdiv_series(const std::string& word,
                                               std::span<const ContextTable* const> tables) {
  std::vector<std::optional<double>> out(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto* table = tables[t];
    if (!table) continue;
    const auto* counts = table->find(word);
    if (!counts || counts->empty()) continue;
    out[t] = contextual_diversity(word, *table);
  }
  return out;
}

DiachronicFit fit_diachronic(const std::string& word, std::span<const std::optional<double>> cdiv,
                             const CorpusMeta& meta, std::span<const double> freq, std::size_t min_decades) {
  const std::size_t T = cdiv.size();
  if (meta.books_per_decade.size() < T || freq.size() < T)
    throw ArgumentError("diachronic fit for '" + word + "': series shorter than the CDiv series");
  std::vector<std::size_t> rows;
  for (std::size_t t = 0; t < T; ++t)
    if (cdiv[t]) rows.push_back(t);
  if (rows.size() < min_decades)
    throw DataError("'" + word + "' has CDiv in " + std::to_string(rows.size()) + " decades, fewer than " +
                    std::to_string(min_decades));

  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd full(n, 4);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto t = rows[static_cast<std::size_t>(i)];
    full(i, 0) = 1.0;
    full(i, 1) = std::log(static_cast<double>(meta.books_per_decade[t]));
    full(i, 2) = freq[t];
    full(i, 3) = static_cast<double>(t + 1);
    y(i) = *cdiv[t];
  }

  // Keep const and t, then add ln B_t and F_t while they raise the rank.
  std::vector<Eigen::Index> keep{0, 3};
  for (Eigen::Index c : {1, 2}) {
    std::vector<Eigen::Index> trial = keep;
    trial.push_back(c);
    Eigen::MatrixXd X(n, static_cast<Eigen::Index>(trial.size()));
    for (std::size_t j = 0; j < trial.size(); ++j) X.col(static_cast<Eigen::Index>(j)) = full.col(trial[j]);
    if (dependent_columns(X).empty()) keep = trial;
  }

  DiachronicFit fit;
  fit.word = word;
  fit.n_decades = rows.size();
  static const char* kNames[] = {"const", "log_books", "freq", "t"};
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(keep.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    X.col(static_cast<Eigen::Index>(j)) = full.col(keep[j]);
    names.emplace_back(kNames[keep[j]]);
  }
  auto has = [&](Eigen::Index c) { return std::find(keep.begin(), keep.end(), c) != keep.end(); };
  fit.dropped_log_books = !has(1);
  fit.dropped_frequency = !has(2);
  if (fit.dropped_log_books) fit.warnings.push_back("'" + word + "': log_books collinear, dropped");
  if (fit.dropped_frequency) fit.warnings.push_back("'" + word + "': freq collinear, dropped");

  const auto res = ols(X, y, names);
  double* slots[] = {&fit.beta0, &fit.beta1, &fit.beta2, &fit.beta3};
  for (std::size_t j = 0; j < keep.size(); ++j) *slots[keep[j]] = res.coef[j];
  fit.r2 = res.pseudo_r2;
  return fit;
}

Beta3Comparison compare_beta3(std::span<const MatchedPair> pairs, std::span<const DiachronicFit> fits) {
  std::map<std::string, const DiachronicFit*> by_word;
  for (const auto& f : fits) by_word[f.word] = &f;
  Beta3Comparison cmp;
  cmp.total_pairs = pairs.size();
  for (const auto& p : pairs) {
    auto d = by_word.find(p.dec), s = by_word.find(p.stb);
    if (d == by_word.end() || s == by_word.end()) {
      ++cmp.excluded_pairs;
      continue;
    }
    cmp.dec_beta3.push_back(d->second->beta3);
    cmp.stb_beta3.push_back(s->second->beta3);
  }
  cmp.included_pairs = cmp.dec_beta3.size();
  if (cmp.included_pairs == 0) throw DataError("no pair has diachronic fits for both words");
  cmp.dec = summarize(cmp.dec_beta3);
  cmp.stb = summarize(cmp.stb_beta3);
  cmp.paired = wilcoxon_signed_rank(cmp.dec_beta3, cmp.stb_beta3);
  cmp.dec_vs_zero = one_sample_wilcoxon(cmp.dec_beta3);
  cmp.stb_vs_zero = one_sample_wilcoxon(cmp.stb_beta3);
  return cmp;
}

void write_beta3_table(const std::filesystem::path& path, std::span<const MatchedPair> pairs,
                       std::span<const DiachronicFit> fits, const std::string& header_comment) {
  std::map<std::string, const DiachronicFit*> by_word;
  for (const auto& f : fits) by_word[f.word] = &f;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << header_comment << "word\tset\tbeta0\tbeta1\tbeta2\tbeta3\tr2\tn_decades\n";
  auto row = [&](const std::string& w, const char* set) {
    auto it = by_word.find(w);
    if (it == by_word.end()) return;
    const auto& f = *it->second;
    out << w << '\t' << set << '\t' << format_double(f.beta0) << '\t' << format_double(f.beta1) << '\t'
        << format_double(f.beta2) << '\t' << format_double(f.beta3) << '\t' << format_double(f.r2) << '\t'
        << f.n_decades << '\n';
  };
  for (const auto& p : pairs) {
    row(p.dec, "dec");
    row(p.stb, "stb");
  }
}

}  // namespace lexdecline
