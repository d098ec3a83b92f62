#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lexdecline/diachronic.hpp"
#include "lexdecline/error.hpp"
#include "lexdecline/rng.hpp"
#include "oracles.hpp"

using namespace lexdecline;

namespace {

CorpusMeta meta_with_books(const std::vector<std::uint64_t>& books) {
  CorpusMeta m;
  m.axis.count = books.size();
  m.books_per_decade = books;
  for (auto b : books) m.tokens_per_decade.push_back(b * 1000);
  return m;
}

ContextTable table_with(const std::vector<double>& prior, const ContextCounts& counts) {
  ContextTable t;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    t.context_vocab.push_back("c" + std::to_string(i));
    t.context_index.emplace(t.context_vocab.back(), static_cast<std::uint32_t>(i));
  }
  t.prior = prior;
  if (!counts.empty()) t.counts["w"] = counts;
  return t;
}

}  // namespace

TEST_SUITE("diachronic") {
  TEST_CASE("series follow the tables") {
    const std::vector<double> prior(10, 0.1);
    std::vector<ContextTable> tables;
    for (std::size_t t = 0; t < 21; ++t) {
      ContextCounts cc;
      if (t <= 10)
        for (std::uint32_t c = 0; c < 10 - std::min<std::size_t>(t, 9); ++c) cc.emplace_back(c, 5);
      tables.push_back(table_with(prior, cc));
    }
    std::vector<const ContextTable*> ptrs;
    for (const auto& t : tables) ptrs.push_back(&t);
    const auto s = cdiv_series("w", ptrs);
    for (std::size_t t = 0; t < 21; ++t) CHECK(s[t].has_value() == (t <= 10));
    for (std::size_t t = 1; t <= 9; ++t) CHECK(*s[t] < *s[t - 1]);  // narrowing support
    CHECK(*s[0] == 1.0);

    std::vector<const ContextTable*> same(5, &tables[0]);
    for (const auto& v : cdiv_series("w", same)) CHECK(*v == *cdiv_series("w", same)[0]);
  }

  TEST_CASE("linear in t with constant books and frequency") {
    const auto meta = meta_with_books(std::vector<std::uint64_t>(21, 5000));
    const std::vector<double> freq(21, 1e-5);
    std::vector<std::optional<double>> cdiv(21);
    for (std::size_t t = 0; t < 21; ++t) cdiv[t] = 0.3 - 0.004 * static_cast<double>(t + 1);
    const auto fit = fit_diachronic("w", cdiv, meta, freq);
    CHECK(fit.beta3 == doctest::Approx(-0.004).epsilon(1e-10));
    CHECK(fit.dropped_log_books);
    CHECK(fit.dropped_frequency);
    CHECK(fit.beta1 == 0.0);
    CHECK_FALSE(fit.warnings.empty());

    std::vector<std::optional<double>> flat(21, 0.25);
    CHECK(std::fabs(fit_diachronic("w", flat, meta, freq).beta3) < 1e-14);
  }

  TEST_CASE("planted coefficients are recovered") {
    std::vector<std::uint64_t> books;
    for (std::size_t t = 0; t < 21; ++t) books.push_back(static_cast<std::uint64_t>(4000 * std::pow(1 + 0.35 * t, 1.6)));
    const auto meta = meta_with_books(books);
    Rng rng(81);
    std::vector<double> freq(21);
    for (auto& f : freq) f = rng.uniform(1e-6, 1e-4);
    std::vector<std::optional<double>> cdiv(21);
    for (std::size_t t = 0; t < 21; ++t)
      cdiv[t] = 0.5 - 0.002 * static_cast<double>(t + 1) + 0.01 * std::log(static_cast<double>(books[t]));
    const auto fit = fit_diachronic("w", cdiv, meta, freq);
    CHECK(std::fabs(fit.beta0 - 0.5) < 1e-9);
    CHECK(std::fabs(fit.beta1 - 0.01) < 1e-9);
    CHECK(std::fabs(fit.beta2) < 1e-9);
    CHECK(std::fabs(fit.beta3 + 0.002) < 1e-9);
    CHECK(fit.n_decades == 21);
  }

  TEST_CASE("beta3 is unchanged by rescaling books and equals the simple slope when regressors are flat") {
    Rng rng(82);
    for (int r = 0; r < 20; ++r) {
      std::vector<std::uint64_t> books, scaled;
      std::vector<double> freq(21);
      std::vector<std::optional<double>> cdiv(21);
      for (std::size_t t = 0; t < 21; ++t) {
        books.push_back(1000 + rng.index(50000));
        scaled.push_back(books.back() * 7);  // ln B + ln 7
        freq[t] = rng.uniform(1e-6, 1e-4);
        cdiv[t] = rng.uniform(0.001, 0.02);
      }
      const auto a = fit_diachronic("w", cdiv, meta_with_books(books), freq);
      const auto b = fit_diachronic("w", cdiv, meta_with_books(scaled), freq);
      CHECK(a.beta3 == doctest::Approx(b.beta3).epsilon(1e-9));

      const auto flat = fit_diachronic("w", cdiv, meta_with_books(std::vector<std::uint64_t>(21, 900)),
                                       std::vector<double>(21, 2e-5));
      long double mt = 11, my = 0, sxy = 0, sxx = 0;
      for (auto v : cdiv) my += *v;
      my /= 21;
      for (std::size_t t = 0; t < 21; ++t) {
        sxy += (t + 1 - mt) * (*cdiv[t] - my);
        sxx += (t + 1 - mt) * (t + 1 - mt);
      }
      CHECK(std::fabs(flat.beta3 - static_cast<double>(sxy / sxx)) < 1e-12);
    }
  }

  TEST_CASE("too few decades") {
    const auto meta = meta_with_books(std::vector<std::uint64_t>(21, 5000));
    std::vector<std::optional<double>> sparse(21);
    for (std::size_t t = 0; t < 4; ++t) sparse[t] = 0.1 * t;
    CHECK_THROWS_AS(fit_diachronic("w", sparse, meta, std::vector<double>(21, 1e-5)), DataError);
  }

  TEST_CASE("comparison conservation and exact minimum p") {
    std::vector<MatchedPair> pairs;
    std::vector<DiachronicFit> fits;
    for (int i = 0; i < 12; ++i) {
      const auto d = "d" + std::to_string(i), s = "s" + std::to_string(i);
      pairs.push_back({d, s, "NOUN", 1, 1, 5, 5});
      DiachronicFit fd, fs;
      fd.word = d;
      fd.beta3 = -0.001;
      fs.word = s;
      fs.beta3 = 0.002;
      fits.push_back(fd);
      if (i < 10) fits.push_back(fs);  // two stables lack a fit
    }
    const auto cmp = compare_beta3(pairs, fits);
    CHECK(cmp.included_pairs == 10);
    CHECK(cmp.excluded_pairs == 2);
    CHECK(cmp.included_pairs + cmp.excluded_pairs == cmp.total_pairs);
    CHECK(cmp.paired.p_two_sided == 2.0 / 1024.0);
    CHECK(cmp.dec.mean < 0.0);
    CHECK(cmp.stb.mean > 0.0);

    for (auto& f : fits) f.beta3 = 0.5;
    CHECK(compare_beta3(pairs, fits).paired.degenerate);
  }
}
