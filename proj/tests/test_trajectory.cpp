#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lexdecline/corpus.hpp"
#include "lexdecline/rng.hpp"
#include "lexdecline/trajectory.hpp"
#include "oracles.hpp"

using namespace lexdecline;

namespace {

std::vector<double> curve(double a, double b) {
  std::vector<double> y(21);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = decline_curve(a, b, static_cast<double>(i + 1));
  return y;
}

WordSeries series(const std::string& word, std::vector<double> rel, const std::string& pos = "NOUN") {
  WordSeries s;
  s.word = word;
  s.pos = pos;
  s.length = word.size();
  s.rel = std::move(rel);
  for (double v : s.rel) s.raw.push_back(static_cast<std::uint64_t>(std::llround(v * 1e9)));
  return s;
}

}  // namespace

TEST_SUITE("trajectory") {
  TEST_CASE("exact decline curve is recovered") {
    const auto y = normalize_series(curve(0.01, 12.0));
    const auto fit = fit_decline(y);
    CHECK(fit.mse < 1e-12);
    CHECK(fit.b == doctest::Approx(12.0).epsilon(0.01 / 12.0));
    CHECK(fit.a > 0.0);
  }

  TEST_CASE("uniform and last-decade series match the grid oracle") {
    const std::vector<double> uniform(21, 1.0 / 21);
    std::vector<double> last(21, 0.0);
    last[20] = 1.0;
    for (const auto& y : {uniform, last}) {
      const auto fit = fit_decline(y);
      const auto ref = oracle::grid_decline(y);
      CHECK(std::fabs(fit.mse - ref.mse) <= 1e-9);
      CHECK(fit.b > 0.0);
      CHECK(fit.b <= 21.0);
      CHECK(fit.a > 0.0);
    }
  }

  TEST_CASE("fit agrees with the grid oracle on random vectors") {
    Rng rng(11);
    for (int r = 0; r < 100; ++r) {
      std::vector<double> raw(21);
      for (auto& v : raw) v = std::pow(rng.uniform(), 3.0);
      const auto y = normalize_series(raw);
      CHECK(std::fabs(fit_decline(y).mse - oracle::grid_decline(y).mse) <= 1e-9);
    }
  }

  TEST_CASE("fits are unchanged by scaling before normalization") {
    Rng rng(12);
    for (int r = 0; r < 20; ++r) {
      std::vector<double> raw(21), scaled(21);
      for (std::size_t i = 0; i < raw.size(); ++i) scaled[i] = 37.5 * (raw[i] = rng.uniform());
      const auto a = fit_decline(normalize_series(raw)), b = fit_decline(normalize_series(scaled));
      CHECK(a.mse == doctest::Approx(b.mse).epsilon(1e-12));
      CHECK(a.b == doctest::Approx(b.b).epsilon(1e-9));
    }
  }

  TEST_CASE("stable fit is the mean and population variance") {
    const auto flat = fit_stable(std::vector<double>(21, 1.0 / 21));
    CHECK(flat.mse == doctest::Approx(0.0));
    CHECK(flat.level == doctest::Approx(1.0 / 21));

    std::vector<double> spike(21, 0.0);
    spike[0] = 1.0;
    const auto s = fit_stable(spike);
    const double mean = 1.0 / 21;
    const double var = ((1 - mean) * (1 - mean) + 20 * mean * mean) / 21;
    CHECK(s.level == doctest::Approx(mean).epsilon(1e-15));
    CHECK(s.mse == doctest::Approx(var).epsilon(1e-14));
    CHECK(s.mse > 0.0);
  }

  TEST_CASE("decline filters") {
    FilterPolicy policy;
    std::vector<WordSeries> words;
    auto rel = [](double scale, double b) {
      auto y = curve(1.0, b);
      const double k = scale / y[0];
      for (auto& v : y) v *= k;
      return y;
    };
    words.push_back(series("abc", rel(1e-4, 15)));           // too short
    words.push_back(series("lowfreq", rel(4e-6, 15)));       // rel[0] below the floor
    words.push_back(series("earlyend", rel(1e-4, 8)));       // crosses before decade 10
    words.push_back(series("keeper", rel(1e-4, 15)));
    const auto ranked = rank_decliners(words, policy);
    REQUIRE(ranked.size() == 1);
    CHECK(ranked[0].word == "keeper");
    REQUIRE(ranked[0].b);
    CHECK(*ranked[0].b == doctest::Approx(15.0).epsilon(1e-3));
  }

  TEST_CASE("stable ranking order, filters and ties") {
    std::vector<double> flat(21, 1e-4), sloped(21);
    for (std::size_t i = 0; i < sloped.size(); ++i) sloped[i] = 1e-4 * (1.0 - 0.03 * static_cast<double>(i));
    std::vector<WordSeries> words = {series("slope", sloped), series("zflat", flat), series("aflat", flat),
                                     series("aflat", flat, "VERB"), series("cat", flat)};
    const auto ranked = rank_stable(words, FilterPolicy{});
    REQUIRE(ranked.size() == 4);
    CHECK(ranked[0].word == "aflat");
    CHECK(ranked[0].pos == "NOUN");
    CHECK(ranked[1].pos == "VERB");
    CHECK(ranked[2].word == "zflat");
    CHECK(ranked[3].word == "slope");
    CHECK_FALSE(ranked[0].b.has_value());
  }

  TEST_CASE("parallel ranking equals serial ranking") {
    Rng rng(21);
    std::vector<WordSeries> words;
    for (int w = 0; w < 300; ++w) {
      std::vector<double> rel(21);
      const double b = rng.uniform(10, 21);
      for (std::size_t i = 0; i < rel.size(); ++i)
        rel[i] = 1e-4 * std::max(0.02, (b - static_cast<double>(i + 1)) / b) * std::exp(rng.normal(0, 0.1));
      words.push_back(series("word" + std::to_string(w), rel));
    }
    const auto a = rank_decliners(words, {}, 1), b = rank_decliners(words, {}, 4);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].word == b[i].word);
      CHECK(a[i].metric == b[i].metric);
    }
  }

  TEST_CASE("candidate TSV round trip") {
    testing::TempDir dir;
    std::vector<Candidate> c = {{"alpha", "NOUN", 1.5e-5, 0.01, 14.25}, {"beta", "VERB", 2e-6, 0.0, std::nullopt}};
    write_candidates(dir / "c.tsv", c, "# header\n");
    const auto back = read_candidates(dir / "c.tsv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].metric == c[0].metric);
    CHECK(back[0].b == c[0].b);
    CHECK_FALSE(back[1].b.has_value());
  }
}
