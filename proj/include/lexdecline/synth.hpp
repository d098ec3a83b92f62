#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lexdecline {

// Knobs for the synthetic bundle. Gaps are in latent standard deviations:
// declining words draw each latent factor from N(+-gap/2, 1) and their
// stable partners from the opposite side; filler words sit at 0.
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t vocab_size = 10000;  // filler words; planted words come on top
  std::size_t n_dec = 300;
  std::size_t n_stb = 300;  // >= n_dec; the first n_dec are built as partners
  std::size_t decades = 21;
  int start_year = 1800;
  double zipf_exponent = 1.0;
  std::size_t context_vocab = 10000;  // must not exceed vocab_size
  std::size_t head_exclude = 100;

  // frequency series
  double min_initial_freq = 1e-5;
  double max_initial_freq = 1e-4;
  double min_onset = 12.0;  // decline crossing decade, 1-based
  double max_onset = 20.0;
  double decline_floor = 0.02;  // residual level after the crossing, relative to the start
  double freq_noise = 0.1;      // log-normal sd for declining words
  double stable_noise = 0.02;
  double filler_noise = 0.15;
  double partner_freq_spread = 0.05;

  // semantic density: per-word cluster noise scale exp(-sem_scale * z)
  std::size_t dimension = 48;
  std::size_t clusters = 200;
  double cluster_noise = 0.9;
  double sem_gap = 0.6;
  double sem_scale = 0.3;

  // concreteness: ratings ~ Beta around logistic(conc_slope * u)
  std::size_t conc_dimensions = 4;
  double conc_gap = 0.6;
  double conc_slope = 1.0;
  double conc_precision = 20.0;
  std::size_t rated_words = 3000;

  // meanings: 1 + Poisson(exp(mng_base + mng_scale * z))
  double mng_gap = 0.6;
  double mng_base = 1.3;
  double mng_scale = 0.45;
  double meanings_missing = 0.1;

  // contexts: Polya urn with concentration cdiv_base * exp(cdiv_scale * z)
  double cdiv_gap = 0.6;
  double cdiv_base = 40.0;
  double cdiv_scale = 1.0;
  double cdiv_drift = 1.0;  // log-concentration change over the period, - for decliners, + for stables
  double context_scale = 2e6;  // token-file occurrences per unit relative frequency
  double filler_tokens = 1e5;  // token-file size of the filler background per decade

  void validate() const;  // throws ArgumentError
};

struct SynthManifest {
  std::vector<std::filesystem::path> files;  // relative to the output directory
};

// Writes the bundle into out_dir:
//   freqs.tsv meta.tsv tokens/decade_NN.txt embeddings.txt pronunciations.tsv
//   vowels.txt consonants.txt meanings.tsv concreteness.tsv truth.tsv
SynthManifest generate(const SynthConfig& config, const std::filesystem::path& out_dir);

// tokens/decade_NN.txt for decade index t.
std::filesystem::path token_file(const std::filesystem::path& dir, std::size_t decade);

}  // namespace lexdecline
