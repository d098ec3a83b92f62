#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexdecline/corpus.hpp"
#include "lexdecline/diachronic.hpp"
#include "lexdecline/matching.hpp"
#include "lexdecline/pairs.hpp"
#include "lexdecline/semantics.hpp"
#include "lexdecline/stats.hpp"
#include "lexdecline/synth.hpp"
#include "lexdecline/trajectory.hpp"

namespace lexdecline {

inline constexpr const char* kVersion = "0.3.0";

// Every tunable default, addressable as `section.name` keys.
struct PipelineConfig {
  DecadeAxis axis;
  FilterPolicy filter;
  MatchPolicy match{.max_decliners = 300};
  std::size_t context_vocab = 10000;
  std::size_t head_exclude = 100;
  std::size_t semdens_k = 10;
  BetaRegOptions conc;
  double conc_holdout = 0.1;  // share of rated words kept out of the fit for evaluation
  YearWindow meanings_window;
  std::size_t phon_sample_size = 100000;
  double phon_alpha = 0.1;
  double correlation_alpha = 0.05;
  LogisticOptions logistic;
  double classify_ridge = 1.0;
  std::size_t diachronic_min_decades = kMinDiachronicDecades;
  SynthConfig synth;
};

// Sets one key; throws ArgumentError for an unknown key or a bad value.
void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value);
// `key = value` lines, `#` comments. Errors cite the line.
void load_config_file(PipelineConfig& config, const std::filesystem::path& path);
// All keys with their current values, sorted by key.
std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& config);

// Header block embedded at the top of every report as `# ` lines. Inputs are
// recorded by file name and content hash so that runs in different
// directories produce identical reports.
class RunManifest {
 public:
  explicit RunManifest(std::string command) : command_(std::move(command)) {}
  void input(const std::string& role, const std::filesystem::path& path);
  void value(const std::string& key, const std::string& value) { values_.emplace_back(key, value); }
  void settings(const PipelineConfig& config, const std::vector<std::string>& prefixes);
  std::string header() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> values_;
};

// ---------------------------------------------------------------------------
// Factors
// ---------------------------------------------------------------------------

inline constexpr std::size_t kFactorCount = 7;
inline constexpr std::array<const char*, kFactorCount> kFactorNames = {
    "SemDens", "Conc", "NMngs", "CDiv", "PhonTyp", "PhonDens", "PhonComp"};
enum Factor : std::size_t { SemDens, Conc, NMngs, CDiv, PhonTyp, PhonDens, PhonComp };

std::optional<Factor> factor_from_name(const std::string& name);

struct FactorRow {
  std::array<std::optional<double>, kFactorCount> values;
  std::array<bool, kFactorCount> imputed{};
};

struct FactorTable {
  std::array<bool, kFactorCount> enabled{};
  std::map<std::string, FactorRow> rows;
  std::vector<std::string> notes;  // coverage and fit diagnostics
};

struct FactorInputs {
  std::optional<std::filesystem::path> embeddings, concreteness, meanings, tokens_dir, pronunciations, vowels,
      consonants, freqs, meta;
};

// Which inputs each enabled factor still lacks, as "Factor: --flag" entries.
std::vector<std::string> missing_factor_inputs(const FactorInputs& inputs, const std::array<bool, kFactorCount>& enabled);

// Computes the enabled factors for every word of the pairs, then fills gaps
// with the mean over those words (flagged as imputed). A factor with no
// observed value at all is left missing and noted.
FactorTable compute_factors(std::span<const MatchedPair> pairs, const FactorInputs& inputs,
                            const std::array<bool, kFactorCount>& enabled, const PipelineConfig& config,
                            std::uint64_t seed, unsigned threads);

// word<TAB>SemDens ... PhonComp<TAB>imputed, NA for missing, imputed as a
// comma list or "-".
void write_factors(const std::filesystem::path& path, const FactorTable& table, const std::string& header);
FactorTable read_factors(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Analyses
// ---------------------------------------------------------------------------

struct FactorComparison {
  std::string name;
  Summary dec, stb;
  WilcoxonResult test;
};

struct AnalysisReport {
  std::vector<std::string> factors;  // analysed factors, in table order
  std::vector<FactorComparison> comparisons;
  CorrelationReport correlations;
  RegressionResult logistic;
  std::size_t pairs = 0;
};

// Paired tests, correlations and the pair-order logistic regression. Factor
// values are min-max scaled over all pair words before differencing.
// covariates adds log first-decade frequency and length differences.
AnalysisReport analyze_pairs(std::span<const MatchedPair> pairs, const FactorTable& factors,
                             const PipelineConfig& config, std::uint64_t seed, bool covariates);

// Scaled per-word factor vectors for the analysed factors.
FactorLookup scaled_factor_lookup(std::span<const MatchedPair> pairs, const FactorTable& factors,
                                  std::vector<std::string>* names = nullptr, bool covariates = false);

void write_analysis(const std::filesystem::path& out_dir, const AnalysisReport& report, const std::string& header);

struct DiachronicReport {
  std::vector<DiachronicFit> fits;
  std::vector<std::string> excluded;  // words without enough decades
  Beta3Comparison comparison;
};

DiachronicReport run_diachronic(std::span<const MatchedPair> pairs, const std::filesystem::path& freqs,
                                const std::filesystem::path& meta, const std::filesystem::path& tokens_dir,
                                const PipelineConfig& config, unsigned threads);

void write_diachronic(const std::filesystem::path& out_dir, std::span<const MatchedPair> pairs,
                      const DiachronicReport& report, const std::string& header);

}  // namespace lexdecline
