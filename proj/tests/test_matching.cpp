#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "lexdecline/error.hpp"
#include "lexdecline/matching.hpp"
#include "lexdecline/rng.hpp"

using namespace lexdecline;

namespace {

WordSeries word(const std::string& w, double rel0, std::size_t length, const std::string& pos = "NOUN") {
  WordSeries s;
  s.word = w;
  s.pos = pos;
  s.length = length;
  s.rel.assign(21, rel0);
  s.raw.assign(21, 1);
  return s;
}

Candidate cand(const WordSeries& s) { return {s.word, s.pos, 0.0, 0.0, std::nullopt}; }

MatchedPair pair(double df, double sf, std::size_t dl, std::size_t sl) {
  return {"d", "s", "NOUN", df, sf, dl, sl};
}

}  // namespace

TEST_SUITE("matching") {
  TEST_CASE("eligibility window") {
    const auto dec = word("declining", 1.00e-4, 8);
    CHECK(eligible(dec, word("stabler", 1.09e-4, 9)));
    CHECK(eligible(dec, word("stabler", 0.91e-4, 10)));
    CHECK_FALSE(eligible(dec, word("stabler", 1.12e-4, 8)));
    CHECK_FALSE(eligible(word("dec", 1e-4, 6), word("stb", 1e-4, 9)));
    CHECK_FALSE(eligible(dec, word("stabler", 1e-4, 8, "ADJ")));
    CHECK_FALSE(eligible(dec, dec));
  }

  TEST_CASE("greedy takes the first eligible control in stability order") {
    std::vector<WordSeries> words = {word("dec1", 1e-4, 5), word("dec2", 1e-4, 5), word("stbA", 1.05e-4, 5),
                                     word("stbB", 2e-4, 5), word("stbC", 0.95e-4, 5)};
    std::vector<Candidate> dec = {cand(words[0]), cand(words[1])};
    std::vector<Candidate> stb = {cand(words[3]), cand(words[2]), cand(words[4])};
    const auto r = match_pairs(dec, stb, words);
    REQUIRE(r.pairs.size() == 2);
    CHECK(r.pairs[0].stb == "stbA");
    CHECK(r.pairs[1].stb == "stbC");
    CHECK(r.unmatched.empty());
  }

  TEST_CASE("decliners without a control are reported") {
    std::vector<WordSeries> words = {word("lonely", 1e-4, 6), word("far", 5e-4, 6)};
    const auto r = match_pairs(std::vector{cand(words[0])}, std::vector{cand(words[1])}, words);
    CHECK(r.pairs.empty());
    CHECK(r.unmatched == std::vector<std::string>{"lonely"});
  }

  TEST_CASE("repair brings the length sums within budget") {
    // Greedy picks the +2 controls first; shorter eligible controls exist.
    std::vector<WordSeries> words;
    std::vector<Candidate> dec, stb;
    for (int i = 0; i < 4; ++i) {
      words.push_back(word("dec" + std::to_string(i), 1e-4, 6));
      words.push_back(word("long" + std::to_string(i), 1e-4, 8));
      words.push_back(word("even" + std::to_string(i), 1e-4, 6));
    }
    for (std::size_t i = 0; i < words.size(); i += 3) {
      dec.push_back(cand(words[i]));
      stb.push_back(cand(words[i + 1]));
    }
    for (std::size_t i = 0; i < words.size(); i += 3) stb.push_back(cand(words[i + 2]));
    const auto r = match_pairs(dec, stb, words);
    CHECK(std::labs(r.length_deficit) <= 1);
    CHECK(r.repair_swaps > 0);
    long sum = 0;
    for (const auto& p : r.pairs) sum += p.length_delta();
    CHECK(sum == r.length_deficit);
  }

  TEST_CASE("infeasible budget raises with the deficit") {
    std::vector<WordSeries> words = {word("decA", 1e-4, 5), word("decB", 1e-4, 5), word("stbA", 1e-4, 7),
                                     word("stbB", 1e-4, 7)};
    try {
      match_pairs(std::vector{cand(words[0]), cand(words[1])}, std::vector{cand(words[2]), cand(words[3])}, words);
      FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
      CHECK(e.deficit() == 4);
    }
  }

  TEST_CASE("random pools: per-pair constraints, injectivity, determinism") {
    Rng rng(31);
    std::vector<WordSeries> words;
    std::vector<Candidate> dec, stb;
    const char* pos[] = {"NOUN", "VERB", "ADJ"};
    for (int i = 0; i < 400; ++i) {
      auto w = word("w" + std::to_string(i), std::exp(rng.uniform(std::log(1e-5), std::log(1e-4))),
                    4 + rng.index(8), pos[rng.index(3)]);
      words.push_back(w);
      (i < 60 ? dec : stb).push_back(cand(w));
    }
    const auto r = match_pairs(dec, stb, words);
    const auto again = match_pairs(dec, stb, words);
    std::set<std::string> controls;
    for (const auto& p : r.pairs) {
      CHECK(std::fabs(p.freq_ratio() - 1.0) <= 0.10 + 1e-12);
      CHECK(std::labs(p.length_delta()) <= 2);
      CHECK(p.dec != p.stb);
      CHECK(controls.insert(p.stb).second);
    }
    CHECK(std::labs(r.length_deficit) <= 1);
    REQUIRE(again.pairs.size() == r.pairs.size());
    for (std::size_t i = 0; i < r.pairs.size(); ++i) CHECK(again.pairs[i].stb == r.pairs[i].stb);
  }

  TEST_CASE("validation") {
    std::vector<MatchedPair> same(10, pair(1e-4, 1e-4, 6, 6));
    const auto v = validate_matching(same);
    CHECK(v.frequency.degenerate);
    CHECK(v.pass);

    std::vector<MatchedPair> biased;
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
      const double f = rng.uniform(1e-5, 1e-4);
      biased.push_back(pair(f, 1.2 * f, 6, 6));
    }
    const auto b = validate_matching(biased);
    CHECK(b.frequency.p_two_sided < 0.05);
    CHECK_FALSE(b.pass);

    std::vector<MatchedPair> balanced;
    for (int i = 0; i < 20; ++i) balanced.push_back(pair(1e-4, 1e-4, 6, i % 2 ? 7 : 5));
    const auto l = validate_matching(balanced);
    CHECK(l.length.p_two_sided > 0.05);
    CHECK(l.pass);

    CHECK_THROWS_AS(validate_matching(std::vector<MatchedPair>(5, pair(1e-4, 1e-4, 6, 6))), DataError);
  }

  TEST_CASE("pairs TSV round trip") {
    testing::TempDir dir;
    std::vector<MatchedPair> pairs = {{"alpha", "beta", "NOUN", 1.25e-5, 1.3e-5, 5, 4}};
    write_pairs(dir / "p.tsv", pairs, "# h\n");
    const auto back = read_pairs(dir / "p.tsv");
    REQUIRE(back.size() == 1);
    CHECK(back[0].dec == "alpha");
    CHECK(back[0].stb_freq == 1.3e-5);
    CHECK(back[0].stb_len == 4);
  }
}
