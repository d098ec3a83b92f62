#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lexdecline/corpus.hpp"

namespace lexdecline {

// P(c | w) over the contexts observed with w, as (context id, probability).
struct ContextProfile {
  std::string word;
  std::size_t decade = 0;
  std::vector<std::pair<std::uint32_t, double>> cond;
};

// Throws DataError when w has no in-vocabulary contexts in the table.
ContextProfile context_profile(const std::string& word, const ContextTable& table);

// KL(P(c|w) || P(c)) in nats, summed over the profile's support.
double kl_to_prior(const ContextProfile& profile, const ContextTable& table);

// exp(-KL); in (0, 1], larger means more diverse contexts.
double contextual_diversity(const std::string& word, const ContextTable& table);

}  // namespace lexdecline
