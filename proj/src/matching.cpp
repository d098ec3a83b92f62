#include "lexdecline/matching.hpp"

#include <cmath>
#include <cstdlib>
#include <map>

#include "lexdecline/error.hpp"

namespace lexdecline {
namespace {

// Absorbs decimal round-off at the +-10% boundary (1.1 * f is not exact).
constexpr double kRatioSlack = 1e-12;

MatchedPair make_pair(const WordSeries& dec, const WordSeries& stb) {
  return {dec.word, stb.word, dec.pos, dec.initial_rel(), stb.initial_rel(), dec.length, stb.length};
}

}  // namespace

bool eligible(const WordSeries& dec, const WordSeries& stb, const MatchPolicy& policy) {
  if (dec.word == stb.word && dec.pos == stb.pos) return false;
  if (dec.pos != stb.pos) return false;
  const long delta = static_cast<long>(stb.length) - static_cast<long>(dec.length);
  if (static_cast<std::size_t>(std::labs(delta)) > policy.max_length_delta) return false;
  const double base = dec.initial_rel();
  if (!(base > 0.0)) return false;
  return std::fabs(stb.initial_rel() / base - 1.0) <= policy.freq_tolerance + kRatioSlack;
}

MatchResult match_pairs(std::span<const Candidate> decliners, std::span<const Candidate> stables,
                        std::span<const WordSeries> words, const MatchPolicy& policy) {
  std::map<std::pair<std::string, std::string>, const WordSeries*> index;
  for (const auto& w : words) index.emplace(std::make_pair(w.word, w.pos), &w);
  auto resolve = [&](const Candidate& c) -> const WordSeries& {
    auto it = index.find({c.word, c.pos});
    if (it == index.end()) throw DataError("candidate '" + c.word + "' (" + c.pos + ") missing from frequency data");
    return *it->second;
  };

  std::vector<const WordSeries*> pool;
  for (const auto& c : stables) pool.push_back(&resolve(c));
  std::vector<bool> used(pool.size(), false);

  // A declining word is never its own control, nor a control for another.
  std::vector<const WordSeries*> decs;
  const std::size_t limit = policy.max_decliners ? std::min(policy.max_decliners, decliners.size()) : decliners.size();
  for (std::size_t i = 0; i < limit; ++i) decs.push_back(&resolve(decliners[i]));
  for (std::size_t j = 0; j < pool.size(); ++j)
    for (const auto* d : decs)
      if (d == pool[j]) used[j] = true;

  MatchResult result;
  std::vector<const WordSeries*> matched_dec;
  std::vector<std::size_t> matched_slot;
  for (const auto* dec : decs) {
    std::size_t found = pool.size();
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (!used[j] && eligible(*dec, *pool[j], policy)) {
        found = j;
        break;
      }
    }
    if (found == pool.size()) {
      result.unmatched.push_back(dec->word);
      continue;
    }
    used[found] = true;
    matched_dec.push_back(dec);
    matched_slot.push_back(found);
  }

  long deficit = 0;
  for (std::size_t i = 0; i < matched_dec.size(); ++i)
    deficit += static_cast<long>(pool[matched_slot[i]]->length) - static_cast<long>(matched_dec[i]->length);

  const std::size_t max_attempts = policy.repair_factor * std::max<std::size_t>(matched_dec.size(), 1);
  std::size_t attempts = 0;
  while (std::labs(deficit) > policy.length_budget && attempts < max_attempts) {
    bool improved = false;
    for (std::size_t i = 0; i < matched_dec.size() && !improved && attempts < max_attempts; ++i) {
      const long current = static_cast<long>(pool[matched_slot[i]]->length);
      // Only controls whose length moves the deficit toward zero are tried.
      const bool want_shorter = deficit > 0;
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (used[j]) continue;
        const long len = static_cast<long>(pool[j]->length);
        if (want_shorter ? len >= current : len <= current) continue;
        if (!eligible(*matched_dec[i], *pool[j], policy)) continue;
        ++attempts;
        const long next = deficit + len - current;
        if (std::labs(next) < std::labs(deficit)) {
          used[matched_slot[i]] = false;
          used[j] = true;
          matched_slot[i] = j;
          deficit = next;
          ++result.repair_swaps;
          improved = true;
          break;
        }
        if (attempts >= max_attempts) break;
      }
    }
    if (!improved) break;
  }
  result.length_deficit = deficit;
  if (std::labs(deficit) > policy.length_budget)
    throw BudgetError("matching: length budget violated; sum len(stb) - sum len(dec) = " + std::to_string(deficit) +
                          " after " + std::to_string(attempts) + " swap attempts",
                      deficit);

  for (std::size_t i = 0; i < matched_dec.size(); ++i)
    result.pairs.push_back(make_pair(*matched_dec[i], *pool[matched_slot[i]]));
  return result;
}

MatchValidation validate_matching(std::span<const MatchedPair> pairs) {
  if (pairs.size() < 6) throw DataError("matching validation needs at least 6 pairs");
  std::vector<double> df, sf, dl, sl;
  for (const auto& p : pairs) {
    df.push_back(p.dec_freq);
    sf.push_back(p.stb_freq);
    dl.push_back(static_cast<double>(p.dec_len));
    sl.push_back(static_cast<double>(p.stb_len));
  }
  MatchValidation v;
  v.frequency = wilcoxon_signed_rank(df, sf);
  v.length = wilcoxon_signed_rank(dl, sl);
  v.pass = v.frequency.p_two_sided >= 0.05 && v.length.p_two_sided >= 0.05;
  return v;
}

}  // namespace lexdecline
