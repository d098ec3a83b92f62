// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "lexdecline/cli.hpp"
#include "lexdecline/corpus.hpp"
#include "lexdecline/diachronic.hpp"
#include "lexdecline/distribution.hpp"
#include "lexdecline/matching.hpp"
#include "lexdecline/phonology.hpp"
#include "lexdecline/rng.hpp"
#include "lexdecline/stats.hpp"
#include "lexdecline/trajectory.hpp"
#include "lexdecline/util.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace lexdecline;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------

Outcome decline_fit() {
  Outcome o;
  Rng rng(101);
  double worst = 0.0, fit_time = 0.0;
  for (int r = 0; r < 200; ++r) {
    std::vector<double> raw(21);
    for (auto& v : raw) v = rng.uniform(0.0, 1.0);
    const auto y = normalize_series(raw);
    const auto t0 = Clock::now();
    const auto fit = fit_decline(y);
    fit_time += seconds_since(t0);
    const auto ref = oracle::grid_decline(y);
    worst = std::max(worst, std::fabs(fit.mse - ref.mse));
    o.require(fit.mse <= ref.mse + 1e-9, "fit worse than grid oracle on vector " + std::to_string(r));
  }
  o.require(worst <= 1e-9, "max |mse - oracle| = " + fmt(worst));

  double worst_b = 0.0;
  for (int r = 0; r < 200; ++r) {
    const double b = rng.uniform(2.0, 20.0), a = rng.uniform(0.1, 5.0);
    std::vector<double> raw(21);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = decline_curve(a, b, static_cast<double>(i + 1));
    const auto t0 = Clock::now();
    const auto fit = fit_decline(normalize_series(raw));
    fit_time += seconds_since(t0);
    worst_b = std::max(worst_b, std::fabs(fit.b - b));
  }
  o.require(worst_b <= 0.01, "planted b off by " + fmt(worst_b));
  o.require(fit_time < 5.0, "fit time " + fmt(fit_time) + " s");
  if (o.pass)
    o.detail = "max |dmse| " + fmt(worst) + ", max |db| " + fmt(worst_b) + ", fit time " + fmt(fit_time) + " s";
  return o;
}

Outcome wilcoxon_exact() {
  Outcome o;
  Rng rng(202);
  for (int r = 0; r < 200; ++r) {
    const std::size_t n = 1 + rng.index(12);
    std::vector<double> x(n), y(n);
    // Coarse values so ties and zero differences occur.
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(rng.normal(0.0, 2.0) * 2.0) / 2.0;
      y[i] = std::round(rng.normal(0.3, 2.0) * 2.0) / 2.0;
    }
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];
    const auto res = wilcoxon_signed_rank(x, y, WilcoxonMethod::Exact);
    const double ref = oracle::wilcoxon_enumerate(d);
    o.require(res.p_two_sided == ref, "sample " + std::to_string(r) + ": exact p " + fmt(res.p_two_sided) +
                                          " vs enumeration " + fmt(ref));
  }
  double worst = 0.0;
  for (int r = 0; r < 60; ++r) {
    const std::size_t n = 20 + static_cast<std::size_t>(r % 6);
    std::vector<double> d(n);
    for (auto& v : d) v = rng.normal(0.4, 1.0);
    const double exact = signed_rank_test(d, WilcoxonMethod::Exact).p_two_sided;
    const double approx = signed_rank_test(d, WilcoxonMethod::Normal).p_two_sided;
    worst = std::max(worst, std::fabs(exact - approx));
  }
  o.require(worst <= 0.01, "normal approximation off by " + fmt(worst));
  if (o.pass) o.detail = "200 samples bit-exact, max |normal - exact| " + fmt(worst) + " at n=20..25";
  return o;
}

Outcome logistic_mle() {
  Outcome o;
  Rng rng(303);
  double worst_coef = 0.0, worst_r2 = 0.0;
  int sets = 0;
  while (sets < 20) {
    const std::size_t k = sets < 10 ? 1 : 2;
    const std::size_t n = 8 + rng.index(23);
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    std::vector<int> y(n);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < n; ++i) {
      double eta = 0.2;
      for (std::size_t j = 0; j < k; ++j) {
        rows[i][j] = rng.normal();
        X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        eta += 0.8 * rows[i][j];
      }
      y[i] = rng.uniform() < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j));
    RegressionResult fit;
    try {
      fit = fit_logistic(X, y, names);
    } catch (const SeparationError&) {
      continue;  // a separable draw has no finite MLE to compare against
    } catch (const DataError&) {
      continue;  // one label only
    }
    const auto ref = oracle::logistic_grid_mle(rows, y);
    for (std::size_t j = 0; j < ref.size(); ++j) worst_coef = std::max(worst_coef, std::fabs(fit.coef[j] - ref[j]));
    std::size_t ones = 0;
    for (int l : y) ones += static_cast<std::size_t>(l);
    const double pbar = static_cast<double>(ones) / static_cast<double>(n);
    const double ll_null = static_cast<double>(ones) * std::log(pbar) + static_cast<double>(n - ones) * std::log(1 - pbar);
    const double ll = oracle::logistic_ll(rows, y, fit.coef);
    worst_r2 = std::max(worst_r2, std::fabs(fit.pseudo_r2 - (1.0 - ll / ll_null)));
    ++sets;
  }
  o.require(worst_coef <= 1e-3, "coefficient off grid MLE by " + fmt(worst_coef));
  o.require(worst_r2 <= 1e-6, "pseudo-r2 off by " + fmt(worst_r2));

  // Separable constructions: a threshold on x, and a quasi-separated pair.
  std::vector<std::pair<std::vector<double>, std::vector<int>>> separable = {
      {{-3, -2, -1, -0.5, 0.5, 1, 2, 3}, {0, 0, 0, 0, 1, 1, 1, 1}},
      {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, {1, 1, 1, 1, 1, 0, 0, 0, 0, 0}},
      {{0, 0, 1, 1, 2, 2, 3, 3}, {0, 0, 0, 1, 1, 1, 1, 1}},
  };
  int detected = 0;
  for (const auto& [x, labels] : separable) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(x.size()), 1);
    for (std::size_t i = 0; i < x.size(); ++i) X(static_cast<Eigen::Index>(i), 0) = x[i];
    try {
      fit_logistic(X, labels, {"x"});
    } catch (const SeparationError&) {
      ++detected;
    }
  }
  o.require(detected == static_cast<int>(separable.size()),
            "separation detected on " + std::to_string(detected) + "/" + std::to_string(separable.size()));
  if (o.pass)
    o.detail = "max |dcoef| " + fmt(worst_coef) + ", max |dr2| " + fmt(worst_r2) + ", separation " +
               std::to_string(detected) + "/" + std::to_string(separable.size());
  return o;
}

ContextTable table_with_prior(const std::vector<double>& prior) {
  ContextTable t;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    t.context_vocab.push_back("c" + std::to_string(i));
    t.context_index.emplace(t.context_vocab.back(), static_cast<std::uint32_t>(i));
  }
  t.prior = prior;
  return t;
}

Outcome cdiv_closed_forms() {
  Outcome o;
  Rng rng(404);
  double worst_equal = 0.0, worst_single = 0.0, lo = 1.0, hi = 0.0;
  for (int r = 0; r < 200; ++r) {
    const std::size_t m = 2 + rng.index(30);
    std::vector<std::uint64_t> counts(m);
    std::uint64_t total = 0;
    for (auto& c : counts) total += (c = 1 + rng.index(50));
    std::vector<double> prior(m);
    for (std::size_t i = 0; i < m; ++i) prior[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    auto t = table_with_prior(prior);
    ContextCounts cc;
    for (std::size_t i = 0; i < m; ++i) cc.emplace_back(static_cast<std::uint32_t>(i), counts[i] * 3);
    t.counts["w"] = cc;
    worst_equal = std::max(worst_equal, std::fabs(contextual_diversity("w", t) - 1.0));
    const auto c = static_cast<std::uint32_t>(rng.index(m));
    t.counts["s"] = {{c, 7}};
    worst_single = std::max(worst_single, std::fabs(contextual_diversity("s", t) - prior[c]));
  }
  for (int r = 0; r < 10000; ++r) {
    const std::size_t m = 2 + rng.index(50);
    std::vector<double> prior(m);
    double s = 0.0;
    for (auto& p : prior) s += (p = rng.uniform(0.001, 1.0));
    for (auto& p : prior) p /= s;
    auto t = table_with_prior(prior);
    ContextCounts cc;
    for (std::size_t i = 0; i < m; ++i)
      if (rng.uniform() < 0.6) cc.emplace_back(static_cast<std::uint32_t>(i), 1 + rng.index(1000));
    if (cc.empty()) cc.emplace_back(0u, 1);
    t.counts["w"] = cc;
    const double v = contextual_diversity("w", t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  o.require(worst_equal <= 1e-12, "profile = prior gives |CDiv - 1| " + fmt(worst_equal));
  o.require(worst_single <= 1e-12, "single context off prior by " + fmt(worst_single));
  o.require(lo > 0.0 && hi <= 1.0, "CDiv range [" + fmt(lo) + ", " + fmt(hi) + "]");
  if (o.pass)
    o.detail = "|CDiv-1| " + fmt(worst_equal) + ", |CDiv-prior| " + fmt(worst_single) + ", range [" + fmt(lo) + ", " +
               fmt(hi) + "]";
  return o;
}

std::vector<std::string> random_phones(Rng& rng, const std::vector<std::string>& symbols, std::size_t max_len) {
  std::vector<std::string> out(1 + rng.index(max_len));
  for (auto& s : out) s = symbols[rng.index(symbols.size())];
  return out;
}

const std::vector<std::string> kSymbols = {"p", "t", "k", "s", "m", "n", "l", "a", "e", "i", "o", "u", "ʃ", "ɛ"};

Outcome phondens_oracle() {
  Outcome o;
  Rng rng(505);
  double worst = 0.0;
  for (int r = 0; r < 50; ++r) {
    std::vector<Transcription> lex(100);
    std::vector<std::vector<std::string>> raw(100);
    for (std::size_t i = 0; i < lex.size(); ++i) {
      raw[i] = random_phones(rng, kSymbols, 8);
      lex[i].word = "w" + std::to_string(i);
      lex[i].phones = raw[i];
      lex[i].nuclei_mask.assign(raw[i].size(), false);
    }
    for (std::size_t i = 0; i < lex.size(); ++i)
      worst = std::max(worst, std::fabs(phonological_density(lex[i], lex) - oracle::density_naive(raw[i], raw)));
  }
  o.require(worst <= 1e-9, "density off naive oracle by " + fmt(worst));

  bool symmetric = true, zero_iff_equal = true;
  for (int r = 0; r < 10000; ++r) {
    const auto u = random_phones(rng, kSymbols, 4), v = rng.uniform() < 0.1 ? u : random_phones(rng, kSymbols, 4);
    const double duv = normalized_levenshtein(u, v), dvu = normalized_levenshtein(v, u);
    symmetric = symmetric && duv == dvu;
    zero_iff_equal = zero_iff_equal && ((duv == 0.0) == (u == v));
  }
  o.require(symmetric, "normalized Levenshtein not symmetric");
  o.require(zero_iff_equal, "distance zero does not coincide with equality");

  const std::vector<std::string> kitten = {"k", "i", "t", "t", "e", "n"};
  const std::vector<std::string> sitting = {"s", "i", "t", "t", "i", "n", "g"};
  const double d = normalized_levenshtein(kitten, sitting);
  o.require(d == 3.0 / 7.0, "kitten/sitting = " + fmt(d));
  if (o.pass) o.detail = "max |dens - naive| " + fmt(worst) + ", kitten/sitting " + fmt(d);
  return o;
}

Outcome phoneme_lm() {
  Outcome o;
  Rng rng(606);
  std::map<std::string, Transcription> lexicon;
  std::map<std::string, double> freqs;
  for (int i = 0; i < 300; ++i) {
    Transcription t;
    t.word = "w" + std::to_string(i);
    t.phones = random_phones(rng, kSymbols, 7);
    t.nuclei_mask.assign(t.phones.size(), false);
    freqs[t.word] = rng.uniform(1e-6, 1e-3);
    lexicon.emplace(t.word, t);
  }
  const auto lm = train_phoneme_lm(lexicon, freqs, 100000, 17);
  double worst = 0.0;
  for (int r = 0; r < 1000; ++r) {
    std::vector<std::string> prefix(rng.index(6));
    for (auto& s : prefix) s = kSymbols[rng.index(kSymbols.size())];
    double total = 0.0;
    for (const auto& next : lm.inventory()) total += std::exp(lm.logprob(next, prefix));
    worst = std::max(worst, std::fabs(total - 1.0));
  }
  o.require(worst <= 1e-9, "conditional mass off 1 by " + fmt(worst));

  const UniformPhonemeLM uniform(kSymbols);
  const double expected = -std::log(static_cast<double>(kSymbols.size() + 1));
  bool exact = true;
  for (const auto& [w, t] : lexicon) exact = exact && phonological_typicality(t, uniform) == expected;
  o.require(exact, "uniform typicality differs from -ln V");

  const auto again = train_phoneme_lm(lexicon, freqs, 100000, 17);
  o.require(lm.serialize() == again.serialize(), "retraining with the same seed changed the model");
  if (o.pass) o.detail = "max |sum - 1| " + fmt(worst) + ", uniform -ln V exact, retrain identical";
  return o;
}

// ---------------------------------------------------------------------------
// End-to-end on a synthetic bundle

std::vector<std::vector<std::string>> read_tsv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  for_each_line(p, [&](std::size_t, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    std::vector<std::string> row;
    for (auto f : split(line, '\t')) row.emplace_back(f);
    rows.push_back(std::move(row));
  });
  return rows;
}

std::map<std::string, std::string> read_keyed(const fs::path& p) {
  std::map<std::string, std::string> kv;
  for_each_line(p, [&](std::size_t, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    const auto colon = line.find(": ");
    if (colon != std::string_view::npos)
      kv.emplace(std::string(line.substr(0, colon)), std::string(line.substr(colon + 2)));
  });
  return kv;
}

struct PipelineRun {
  bool ok = true;
  std::string failure;
  double seconds = 0.0;
};

PipelineRun run_pipeline(const fs::path& dir, unsigned threads) {
  PipelineRun run;
  const auto t0 = Clock::now();
  const std::vector<std::string> common = {"--seed", "7", "--out-dir", dir.string(), "--threads",
                                           std::to_string(threads)};
  for (const char* cmd : {"synth", "rank", "match", "factors", "analyze", "classify", "diachronic"}) {
    std::vector<std::string> args{cmd};
    args.insert(args.end(), common.begin(), common.end());
    std::ostringstream out, err;
    if (dispatch(args, out, err) != 0) {
      run.ok = false;
      run.failure = std::string(cmd) + ": " + err.str();
      break;
    }
  }
  run.seconds = seconds_since(t0);
  return run;
}

struct EndToEnd {
  testing::TempDir a, b, c;
  PipelineRun first, second, threaded;
};

Outcome planted_table2(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok, "pipeline failed: " + e.first.failure);
  if (!o.pass) return o;
  const std::map<std::string, int> expected = {{"SemDens", +1}, {"Conc", -1}, {"NMngs", -1}, {"CDiv", -1}};
  std::ostringstream detail;
  int seen = 0;
  for (const auto& row : read_tsv(e.a / "table2.tsv")) {
    auto it = expected.find(row[0]);
    if (it == expected.end()) continue;
    ++seen;
    const double dec = std::stod(row[1]), stb = std::stod(row[3]), p = std::stod(row[7]);
    const int dir = dec > stb ? 1 : -1;
    o.require(p < 0.01, row[0] + " p = " + row[7]);
    o.require(dir == it->second, row[0] + " has the wrong direction");
    detail << row[0] << (dir > 0 ? " dec>stb" : " dec<stb") << " p=" << row[7] << "; ";
  }
  o.require(seen == 4, "table2 lists " + std::to_string(seen) + " of the planted factors");
  o.require(e.first.seconds < 60.0, "full run took " + fmt(e.first.seconds) + " s");
  if (o.pass) o.detail = detail.str() + "run " + fmt(e.first.seconds) + " s";
  return o;
}

Outcome planted_table3(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok, "pipeline failed");
  if (!o.pass) return o;
  const std::map<std::string, int> expected = {{"SemDens", +1}, {"Conc", -1}, {"NMngs", -1}, {"CDiv", -1}};
  std::ostringstream detail;
  for (const auto& row : read_tsv(e.a / "table3.tsv")) {
    auto it = expected.find(row[0]);
    if (it == expected.end()) continue;
    const double coef = std::stod(row[1]), p = std::stod(row[4]);
    o.require((coef > 0 ? 1 : -1) == it->second, row[0] + " coefficient has the wrong sign");
    o.require(p < 0.05, row[0] + " p = " + row[4]);
    detail << row[0] << ' ' << fmt(coef) << " (p=" << row[4] << "); ";
  }
  const double r2 = std::stod(read_keyed(e.a / "report.txt").at("pseudo_r2"));
  o.require(r2 > 0.05, "pseudo-r2 " + fmt(r2));
  if (o.pass) o.detail = detail.str() + "pseudo-r2 " + fmt(r2);
  return o;
}

Outcome classification(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok, "pipeline failed");
  if (!o.pass) return o;
  const double acc = std::stod(read_keyed(e.a / "classify.txt").at("accuracy"));
  o.require(acc > 0.60, "planted accuracy " + fmt(acc));

  Rng rng(909);
  const std::size_t n = 100, k = 7;
  Eigen::MatrixXd X(n, k);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
  const auto labels = assign_pair_labels(n, 909);
  const double noise = loo_accuracy(X, labels, 1.0);
  o.require(noise >= 0.35 && noise <= 0.65, "noise control accuracy " + fmt(noise));
  if (o.pass) o.detail = "planted " + fmt(acc) + ", noise control " + fmt(noise);
  return o;
}

Outcome diachronic_beta3(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok, "pipeline failed");
  if (!o.pass) return o;
  std::vector<double> dec, stb;
  for (const auto& row : read_tsv(e.a / "beta3.tsv")) {
    if (row[0] == "word") continue;
    (row[1] == "dec" ? dec : stb).push_back(std::stod(row[5]));
  }
  const auto pairs = read_pairs(e.a / "pairs.tsv");
  o.require(dec.size() == pairs.size() && stb.size() == pairs.size(),
            "beta3 rows " + std::to_string(dec.size()) + "/" + std::to_string(stb.size()) + " for " +
                std::to_string(pairs.size()) + " pairs");
  if (!o.pass) return o;
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double md = mean(dec), ms = mean(stb);
  const double p = wilcoxon_signed_rank(dec, stb).p_two_sided;
  o.require(md < 0.0 && 0.0 < ms, "mean beta3 dec " + fmt(md) + ", stb " + fmt(ms));
  o.require(p < 0.001, "paired p " + fmt(p));
  o.require(pairs.size() == 300, "only " + std::to_string(pairs.size()) + " pairs");

  // Noiseless series built from known coefficients.
  Rng rng(1010);
  double worst = 0.0;
  for (int r = 0; r < 50; ++r) {
    CorpusMeta meta;
    meta.axis.count = 21;
    std::vector<double> freq(21);
    std::vector<std::optional<double>> cdiv(21);
    const double b0 = rng.uniform(-1, 1), b1 = rng.uniform(-0.1, 0.1), b2 = rng.uniform(-50, 50),
                 b3 = rng.uniform(-0.01, 0.01);
    for (std::size_t t = 0; t < 21; ++t) {
      const auto books = static_cast<std::uint64_t>(1000 + rng.index(100000));
      meta.books_per_decade.push_back(books);
      meta.tokens_per_decade.push_back(books * 1000);
      freq[t] = rng.uniform(1e-6, 1e-3);
      if (rng.uniform() < 0.15) continue;  // some undefined decades
      cdiv[t] = b0 + b1 * std::log(static_cast<double>(books)) + b2 * freq[t] + b3 * static_cast<double>(t + 1);
    }
    const auto fit = fit_diachronic("w", cdiv, meta, freq);
    worst = std::max({worst, std::fabs(fit.beta0 - b0), std::fabs(fit.beta1 - b1), std::fabs(fit.beta2 - b2),
                      std::fabs(fit.beta3 - b3)});
  }
  o.require(worst <= 1e-9, "noiseless recovery off by " + fmt(worst));
  if (o.pass)
    o.detail = "mean beta3 dec " + fmt(md) + " < 0 < stb " + fmt(ms) + ", paired p " + fmt(p) +
               ", noiseless max error " + fmt(worst);
  return o;
}

Outcome matching_validity(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok, "pipeline failed");
  if (!o.pass) return o;
  const auto meta = load_meta(e.a / "meta.tsv");
  const auto words = load_frequencies(e.a / "freqs.tsv", meta);
  std::map<std::pair<std::string, std::string>, const WordSeries*> by_key;
  for (const auto& w : words) by_key[{w.word, w.pos}] = &w;
  const auto pairs = read_pairs(e.a / "pairs.tsv");
  long dec_len = 0, stb_len = 0;
  for (const auto& p : pairs) {
    const auto* d = by_key[{p.dec, p.pos}];
    const auto* s = by_key[{p.stb, p.pos}];
    o.require(d && s, p.dec + "/" + p.stb + " not both listed with POS " + p.pos);
    if (!d || !s) continue;
    const double ratio = s->initial_rel() / d->initial_rel();
    o.require(std::fabs(ratio - 1.0) <= 0.10 + 1e-12, p.dec + "/" + p.stb + " frequency ratio " + fmt(ratio));
    const long dl = static_cast<long>(d->length), sl = static_cast<long>(s->length);
    o.require(std::labs(dl - sl) <= 2, p.dec + "/" + p.stb + " length difference");
    dec_len += dl;
    stb_len += sl;
  }
  o.require(std::labs(dec_len - stb_len) <= 1, "length sums differ by " + std::to_string(dec_len - stb_len));
  const auto v = validate_matching(pairs);
  o.require(v.pass, "validate_matching p freq " + fmt(v.frequency.p_two_sided) + ", length " +
                        fmt(v.length.p_two_sided));
  if (o.pass)
    o.detail = std::to_string(pairs.size()) + " pairs, length sums " + std::to_string(dec_len) + "/" +
               std::to_string(stb_len) + ", p freq " + fmt(v.frequency.p_two_sided) + ", p length " +
               fmt(v.length.p_two_sided);
  return o;
}

std::vector<fs::path> files_under(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file()) out.push_back(fs::relative(entry.path(), root));
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism(const EndToEnd& e) {
  Outcome o;
  o.require(e.first.ok && e.second.ok && e.threaded.ok, "a pipeline run failed");
  if (!o.pass) return o;
  const auto files = files_under(e.a.path());
  o.require(files == files_under(e.b.path()), "repeat run wrote a different file set");
  o.require(files == files_under(e.c.path()), "threaded run wrote a different file set");
  if (!o.pass) return o;
  for (const auto& f : files) {
    const auto ref = testing::read_file(e.a.path() / f);
    o.require(ref == testing::read_file(e.b.path() / f), f.string() + " differs between identical runs");
    o.require(ref == testing::read_file(e.c.path() / f), f.string() + " differs with --threads 8");
  }
  if (o.pass)
    o.detail = std::to_string(files.size()) + " files identical across repeat and --threads 8 (" +
               fmt(e.threaded.seconds) + " s threaded)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  EndToEnd e2e;
  bool e2e_ready = false;
  const auto pipeline = [&]() -> const EndToEnd& {
    if (!e2e_ready) {
      e2e.first = run_pipeline(e2e.a.path(), 1);
      e2e.second = run_pipeline(e2e.b.path(), 1);
      e2e.threaded = run_pipeline(e2e.c.path(), 8);
      e2e_ready = true;
    }
    return e2e;
  };

  const std::vector<Criterion> criteria = {
      {"decline fit vs grid oracle", decline_fit},
      {"wilcoxon exact vs enumeration", wilcoxon_exact},
      {"logistic MLE vs grid oracle", logistic_mle},
      {"CDiv closed forms", cdiv_closed_forms},
      {"PhonDens vs naive oracle", phondens_oracle},
      {"phoneme LM sanity", phoneme_lm},
      {"planted paired differences", [&] { return planted_table2(pipeline()); }},
      {"planted logistic signs", [&] { return planted_table3(pipeline()); }},
      {"LOO classification", [&] { return classification(pipeline()); }},
      {"diachronic beta3", [&] { return diachronic_beta3(pipeline()); }},
      {"matching validity", [&] { return matching_validity(pipeline()); }},
      {"determinism", [&] { return determinism(pipeline()); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].name << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
