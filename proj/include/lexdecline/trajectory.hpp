#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lexdecline/corpus.hpp"

namespace lexdecline {

// Decline curve x(t) = a (b - t) for t <= b, 0 for t > b, over t = 1..n.
struct PiecewiseFit {
  double a = 0.0;
  double b = 0.0;
  double mse = 0.0;
};

struct StabilityFit {
  double level = 0.0;
  double mse = 0.0;
};

struct FilterPolicy {
  std::size_t min_length = 4;
  double min_initial_relfreq = 5e-6;
  double min_crossing = 10.0;
  // Stable candidates with a larger horizontal-fit MSE are dropped.
  double max_stable_mse = std::numeric_limits<double>::infinity();
  // Words skipped outright (inflectional variants, known OCR noise...).
  std::unordered_set<std::string> stoplist;
};

// Evaluates the decline curve at 1-based decade t.
double decline_curve(double a, double b, double t);

// MSE of the decline curve (a, b) against y over all points.
double decline_mse(std::span<const double> y, double a, double b);

// Best (a, b) for a normalized series: b scanned on a 0.01 grid over (0, n],
// the slope solved in closed form for each b, then golden-section refinement
// of b around the best grid point.
PiecewiseFit fit_decline(std::span<const double> y);

StabilityFit fit_stable(std::span<const double> y);

struct Candidate {
  std::string word;
  std::string pos;
  double metric = 0.0;
  double a = 0.0;
  std::optional<double> b;  // decline candidates only
};

// Ascending decline MSE, ties by word then pos.
std::vector<Candidate> rank_decliners(std::span<const WordSeries> words, const FilterPolicy& policy,
                                      unsigned threads = 1);
// Ascending stability MSE, ties by word then pos.
std::vector<Candidate> rank_stable(std::span<const WordSeries> words, const FilterPolicy& policy,
                                   unsigned threads = 1);

// Candidate TSV: word<TAB>pos<TAB>metric<TAB>a<TAB>b (b blank for stable).
void write_candidates(const std::filesystem::path& path, std::span<const Candidate> candidates,
                      const std::string& header_comment = {});
std::vector<Candidate> read_candidates(const std::filesystem::path& path);

}  // namespace lexdecline
