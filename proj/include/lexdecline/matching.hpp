#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lexdecline/corpus.hpp"
#include "lexdecline/pairs.hpp"
#include "lexdecline/stats.hpp"
#include "lexdecline/trajectory.hpp"

namespace lexdecline {

struct MatchPolicy {
  double freq_tolerance = 0.10;     // |stb/dec - 1| on first-decade relative frequency
  std::size_t max_length_delta = 2;
  long length_budget = 1;           // |sum len(stb) - sum len(dec)|
  std::size_t max_decliners = 0;    // 0 = use every decliner
  std::size_t repair_factor = 10;   // swap attempts allowed per pair
};

struct MatchResult {
  std::vector<MatchedPair> pairs;
  std::vector<std::string> unmatched;  // decliners with no eligible control
  long length_deficit = 0;             // sum len(stb) - sum len(dec)
  std::size_t repair_swaps = 0;
};

bool eligible(const WordSeries& dec, const WordSeries& stb, const MatchPolicy& policy = {});

// Greedy pass in decliner order against the stability-ordered pool, then a
// bounded first-improvement repair that replaces controls with unused
// eligible words until the length budget holds. Throws BudgetError when the
// repair runs out of attempts or improving swaps.
MatchResult match_pairs(std::span<const Candidate> decliners, std::span<const Candidate> stables,
                        std::span<const WordSeries> words, const MatchPolicy& policy = {});

struct MatchValidation {
  WilcoxonResult frequency;
  WilcoxonResult length;
  bool pass = false;  // both p >= 0.05
};

MatchValidation validate_matching(std::span<const MatchedPair> pairs);

}  // namespace lexdecline
