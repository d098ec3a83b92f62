#include "lexdecline/distribution.hpp"

#include <cassert>
#include <cmath>

#include "lexdecline/error.hpp"

namespace lexdecline {

ContextProfile context_profile(const std::string& word, const ContextTable& table) {
  const auto* counts = table.find(word);
  if (!counts || counts->empty())
    throw DataError("'" + word + "' has no in-vocabulary contexts in decade " + std::to_string(table.decade));
  double total = 0.0;
  for (const auto& [c, n] : *counts) total += static_cast<double>(n);
  ContextProfile profile{word, table.decade, {}};
  profile.cond.reserve(counts->size());
  for (const auto& [c, n] : *counts) profile.cond.emplace_back(c, static_cast<double>(n) / total);
  return profile;
}

double kl_to_prior(const ContextProfile& profile, const ContextTable& table) {
  double kl = 0.0;
  for (const auto& [c, p] : profile.cond) {
    if (c >= table.prior.size()) throw DataError("context id outside the table's vocabulary");
    const double q = table.prior[c];
    assert(q > 0.0);
    kl += p * std::log(p / q);
  }
  // Rounding can leave a tiny negative value when the profile equals the prior.
  return std::max(kl, 0.0);
}

double contextual_diversity(const std::string& word, const ContextTable& table) {
  return std::exp(-kl_to_prior(context_profile(word, table), table));
}

}  // namespace lexdecline
