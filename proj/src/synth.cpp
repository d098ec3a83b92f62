#include "lexdecline/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "lexdecline/error.hpp"
#include "lexdecline/rng.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw ArgumentError("synth: " + what); };
  if (n_dec == 0) fail("n_dec must be positive");
  if (n_stb < n_dec) fail("n_stb must be at least n_dec");
  if (decades < 2) fail("decades must be at least 2");
  if (context_vocab <= head_exclude) fail("context_vocab must exceed head_exclude");
  if (vocab_size < context_vocab)
    fail("vocab_size " + std::to_string(vocab_size) + " is smaller than context_vocab " +
         std::to_string(context_vocab) + "; the context table would be infeasible");
  if (!(min_initial_freq > 0.0 && max_initial_freq >= min_initial_freq && max_initial_freq < 0.01))
    fail("initial frequency range must satisfy 0 < min <= max < 0.01");
  if (!(min_onset > 1.0 && max_onset >= min_onset && max_onset <= static_cast<double>(decades)))
    fail("onset range must lie within (1, decades]");
  if (!(decline_floor >= 0.0 && decline_floor < 1.0)) fail("decline_floor must be in [0, 1)");
  for (double v : {freq_noise, stable_noise, filler_noise, partner_freq_spread, cluster_noise, sem_gap, conc_gap,
                   mng_gap, cdiv_gap, sem_scale, cdiv_scale, mng_scale, cdiv_drift})
    if (!(v >= 0.0) || !std::isfinite(v)) fail("noise, gap and scale knobs must be finite and non-negative");
  if (partner_freq_spread >= 0.1) fail("partner_freq_spread must stay below the 10% matching window");
  if (dimension < 2 || clusters == 0 || clusters > vocab_size) fail("need dimension >= 2 and 1 <= clusters <= vocab_size");
  if (!(conc_precision > 0.0) || rated_words < 10 || rated_words > vocab_size)
    fail("need conc_precision > 0 and 10 <= rated_words <= vocab_size");
  if (!(meanings_missing >= 0.0 && meanings_missing < 1.0)) fail("meanings_missing must be in [0, 1)");
  if (!(cdiv_base > 0.0 && context_scale > 0.0 && filler_tokens > 0.0 && zipf_exponent > 0.0))
    fail("cdiv_base, context_scale, filler_tokens and zipf_exponent must be positive");
}

std::filesystem::path token_file(const std::filesystem::path& dir, std::size_t decade) {
  char name[32];
  std::snprintf(name, sizeof name, "decade_%02zu.txt", decade);
  return dir / name;
}

namespace {

// Letters map one-to-one onto phones.
struct Letter {
  char letter;
  const char* phone;
  bool vowel;
};
constexpr Letter kLetters[] = {
    {'a', "a", true},  {'e', "ɛ", true},  {'i', "i", true},  {'o', "ɔ", true},  {'u', "u", true},
    {'p', "p", false}, {'t', "t", false}, {'k', "k", false}, {'b', "b", false}, {'d', "d", false},
    {'g', "g", false}, {'m', "m", false}, {'n', "n", false}, {'s', "s", false}, {'l', "l", false},
    {'r', "r", false}, {'v', "v", false}, {'f', "f", false}, {'z', "z", false}, {'c', "ʃ", false},
    {'x', "x", false}, {'j', "j", false},
};
constexpr std::size_t kVowelCount = 5;
constexpr std::size_t kLetterCount = std::size(kLetters);

const char* kPos[] = {"NOUN", "VERB", "ADJ", "ADV"};
constexpr double kPosWeights[] = {0.5, 0.25, 0.17, 0.08};

enum class Role { Filler, Dec, Stb };

struct Word {
  std::string text;
  std::string pos;
  Role role = Role::Filler;
  double r0 = 0.0;      // relative frequency in the first decade (before noise)
  double onset = 0.0;   // decliners
  double z_sem = 0.0, z_conc = 0.0, z_mng = 0.0, z_cdiv = 0.0;
  std::vector<double> rel;
  std::vector<std::uint64_t> raw;
};

class Namer {
 public:
  explicit Namer(Rng& rng) : rng_(rng) {}

  std::string make(std::size_t length) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::string w;
      while (w.size() < length) {
        const double u = rng_.uniform();
        if (u < 0.6) {
          w += consonant();
          w += vowel();
        } else if (u < 0.85) {
          w += consonant();
          w += vowel();
          w += consonant();
        } else if (u < 0.95) {
          w += consonant();
          w += consonant();
          w += vowel();
        } else {
          w += vowel();
        }
      }
      w.resize(length);
      if (used_.insert(w).second) return w;
    }
    throw ArgumentError("synth: could not generate a fresh word of length " + std::to_string(length));
  }

 private:
  char vowel() { return kLetters[rng_.index(kVowelCount)].letter; }
  char consonant() { return kLetters[kVowelCount + rng_.index(kLetterCount - kVowelCount)].letter; }

  Rng& rng_;
  std::set<std::string> used_;
};

std::string phones_of(const std::string& word) {
  std::string out;
  for (char c : word) {
    for (const auto& l : kLetters)
      if (l.letter == c) {
        if (!out.empty()) out += ' ';
        out += l.phone;
      }
  }
  return out;
}

std::string draw_pos(Rng& rng) {
  double u = rng.uniform();
  for (std::size_t i = 0; i < std::size(kPos); ++i) {
    if (u < kPosWeights[i]) return kPos[i];
    u -= kPosWeights[i];
  }
  return kPos[0];
}

double lognormal_factor(Rng& rng, double sd) { return sd > 0.0 ? std::exp(sd * rng.normal() - 0.5 * sd * sd) : 1.0; }

double beta_draw(Rng& rng, double a, double b) {
  const double x = rng.gamma(a), y = rng.gamma(b);
  return x / (x + y);
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t sample_cumulative(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

SynthManifest generate(const SynthConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir / "tokens");
  Rng rng(cfg.seed);
  Namer namer(rng);
  const std::size_t T = cfg.decades;

  // --- corpus size -------------------------------------------------------
  std::vector<std::uint64_t> books(T), tokens(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double x = static_cast<double>(t);
    books[t] = static_cast<std::uint64_t>(std::llround(4000.0 * std::pow(1.0 + 0.35 * x, 1.6)));
    tokens[t] = books[t] * 50000;
  }

  // --- vocabulary --------------------------------------------------------
  std::vector<Word> words;
  words.reserve(cfg.vocab_size + cfg.n_dec + cfg.n_stb);
  double harmonic = 0.0;
  for (std::size_t r = 1; r <= cfg.vocab_size; ++r) harmonic += std::pow(static_cast<double>(r), -cfg.zipf_exponent);
  std::vector<double> zipf(cfg.vocab_size);
  for (std::size_t r = 0; r < cfg.vocab_size; ++r)
    zipf[r] = 0.9 * std::pow(static_cast<double>(r + 1), -cfg.zipf_exponent) / harmonic;

  for (std::size_t r = 0; r < cfg.vocab_size; ++r) {
    Word w;
    std::size_t len = 2 + rng.index(3) + rng.index(3) + rng.index(4);  // 2..9, mode near 5
    w.text = namer.make(len);
    w.pos = draw_pos(rng);
    w.r0 = zipf[r];
    words.push_back(std::move(w));
  }

  const double log_lo = std::log(cfg.min_initial_freq), log_hi = std::log(cfg.max_initial_freq);
  auto latent = [&](Word& w, double side) {
    // side = +1 for decliners, -1 for stables; SemDens rises with decline,
    // the other three fall.
    w.z_sem = rng.normal(side * cfg.sem_gap / 2.0, 1.0);
    w.z_conc = rng.normal(-side * cfg.conc_gap / 2.0, 1.0);
    w.z_mng = rng.normal(-side * cfg.mng_gap / 2.0, 1.0);
    w.z_cdiv = rng.normal(-side * cfg.cdiv_gap / 2.0, 1.0);
  };

  const std::size_t first_dec = words.size();
  for (std::size_t i = 0; i < cfg.n_dec; ++i) {
    Word w;
    w.text = namer.make(5 + rng.index(6));
    w.pos = draw_pos(rng);
    w.role = Role::Dec;
    w.r0 = std::exp(rng.uniform(log_lo, log_hi));
    w.onset = rng.uniform(cfg.min_onset, cfg.max_onset);
    latent(w, +1.0);
    words.push_back(std::move(w));
  }

  // Length offsets for partners: balanced -1/0/+1, summing to zero.
  std::vector<int> offsets(cfg.n_dec, 0);
  for (std::size_t i = 0; i + 1 < cfg.n_dec; i += 2) {
    offsets[i] = (i / 2) % 2 == 0 ? 1 : 0;
    offsets[i + 1] = -offsets[i];
  }
  for (std::size_t i = cfg.n_dec; i-- > 1;) std::swap(offsets[i], offsets[rng.index(i + 1)]);

  // Decliner frequency series first: partners copy the observed start.
  auto fill_series = [&](Word& w, double noise, const std::vector<double>& shape) {
    w.rel.assign(T, 0.0);
    w.raw.assign(T, 0);
    for (std::size_t t = 0; t < T; ++t) {
      const double level = w.r0 * shape[t] * lognormal_factor(rng, noise);
      w.raw[t] = static_cast<std::uint64_t>(std::llround(level * static_cast<double>(tokens[t])));
      w.rel[t] = static_cast<double>(w.raw[t]) / static_cast<double>(tokens[t]);
    }
  };
  const std::vector<double> flat(T, 1.0);
  for (std::size_t i = 0; i < cfg.n_dec; ++i) {
    Word& w = words[first_dec + i];
    std::vector<double> shape(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double tt = static_cast<double>(t + 1);
      const double line = tt <= w.onset ? (w.onset - tt) / (w.onset - 1.0) : 0.0;
      shape[t] = std::max(line, cfg.decline_floor);
    }
    fill_series(w, cfg.freq_noise, shape);
  }

  for (std::size_t i = 0; i < cfg.n_stb; ++i) {
    Word w;
    w.role = Role::Stb;
    if (i < cfg.n_dec) {
      const Word& d = words[first_dec + i];
      w.text = namer.make(static_cast<std::size_t>(static_cast<long>(d.text.size()) + offsets[i]));
      w.pos = d.pos;
      w.r0 = d.rel[0] * rng.uniform(1.0 - cfg.partner_freq_spread, 1.0 + cfg.partner_freq_spread);
    } else {
      w.text = namer.make(4 + rng.index(7));
      w.pos = draw_pos(rng);
      w.r0 = std::exp(rng.uniform(log_lo, log_hi));
    }
    latent(w, -1.0);
    fill_series(w, cfg.stable_noise, flat);
    words.push_back(std::move(w));
  }

  for (std::size_t r = 0; r < cfg.vocab_size; ++r) fill_series(words[r], cfg.filler_noise, flat);

  // --- frequencies and meta -----------------------------------------------
  SynthManifest manifest;
  {
    std::vector<std::size_t> order(words.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return words[a].text < words[b].text; });
    auto out = open_out(out_dir / "freqs.tsv");
    out << "# word\tpos\tcounts per decade\n";
    for (auto i : order) {
      out << words[i].text << '\t' << words[i].pos;
      for (auto c : words[i].raw) out << '\t' << c;
      out << '\n';
    }
    manifest.files.emplace_back("freqs.tsv");

    auto meta = open_out(out_dir / "meta.tsv");
    for (std::size_t t = 0; t < T; ++t) meta << t << '\t' << tokens[t] << '\t' << books[t] << '\n';
    manifest.files.emplace_back("meta.tsv");
  }

  // --- token files ------------------------------------------------------
  {
    // Background: fixed Zipf counts per filler, shuffled per decade.
    std::vector<std::uint32_t> background;
    for (std::size_t r = 0; r < cfg.vocab_size; ++r) {
      const auto n = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(cfg.filler_tokens * zipf[r])));
      background.insert(background.end(), n, static_cast<std::uint32_t>(r));
    }
    // Fresh contexts come from the filler distribution beyond the head.
    std::vector<double> ctx_cumulative;
    double acc = 0.0;
    for (std::size_t r = cfg.head_exclude; r < cfg.vocab_size; ++r) ctx_cumulative.push_back(acc += zipf[r]);

    const double span = static_cast<double>(T - 1);
    std::vector<std::uint32_t> drawn;
    for (std::size_t t = 0; t < T; ++t) {
      std::ostringstream text;
      for (std::size_t i = background.size(); i-- > 1;) std::swap(background[i], background[rng.index(i + 1)]);
      for (std::size_t i = 0; i < background.size(); ++i)
        text << words[background[i]].text << ((i % 12 == 11 || i + 1 == background.size()) ? '\n' : ' ');

      for (std::size_t k = first_dec; k < words.size(); ++k) {
        const Word& w = words[k];
        const auto occurrences =
            static_cast<std::size_t>(std::llround(w.rel[t] * cfg.context_scale));
        if (occurrences == 0) continue;
        const double drift = (w.role == Role::Dec ? -1.0 : 1.0) * cfg.cdiv_drift * static_cast<double>(t) / span;
        const double alpha = cfg.cdiv_base * std::exp(cfg.cdiv_scale * w.z_cdiv + drift);
        // Polya urn: equivalent to multinomial draws from Dirichlet(alpha * base).
        drawn.clear();
        for (std::size_t j = 0; j < 2 * occurrences; ++j) {
          const double n = static_cast<double>(j);
          if (rng.uniform() * (alpha + n) < alpha)
            drawn.push_back(static_cast<std::uint32_t>(cfg.head_exclude + sample_cumulative(rng, ctx_cumulative)));
          else
            drawn.push_back(drawn[rng.index(j)]);
        }
        for (std::size_t j = 0; j < occurrences; ++j)
          text << words[drawn[2 * j]].text << ' ' << w.text << ' ' << words[drawn[2 * j + 1]].text << '\n';
      }
      auto out = open_out(token_file(out_dir / "tokens", t));
      out << text.str();
      manifest.files.push_back(token_file("tokens", t));
    }
  }

  // --- embeddings ---------------------------------------------------------
  {
    const std::size_t D = cfg.dimension, C = cfg.conc_dimensions;
    std::vector<std::vector<double>> centers(cfg.clusters, std::vector<double>(D));
    for (auto& c : centers) {
      double norm = 0.0;
      for (auto& v : c) {
        v = rng.normal();
        norm += v * v;
      }
      for (auto& v : c) v /= std::sqrt(norm);
    }
    std::vector<double> loadings(C);
    for (auto& l : loadings) l = rng.normal(0.0, 0.3);

    auto out = open_out(out_dir / "embeddings.txt");
    out << words.size() << ' ' << D + C << '\n';
    const double per_dim = cfg.cluster_noise / std::sqrt(static_cast<double>(D));
    for (auto& w : words) {
      // Fillers get a latent concreteness too, used for their ratings.
      if (w.role == Role::Filler) w.z_conc = rng.normal();
      const auto& c = centers[rng.index(cfg.clusters)];
      const double scale = per_dim * std::exp(-cfg.sem_scale * w.z_sem);
      out << w.text;
      for (std::size_t d = 0; d < D; ++d) out << ' ' << format_double(c[d] + scale * rng.normal());
      for (std::size_t d = 0; d < C; ++d) out << ' ' << format_double(loadings[d] * w.z_conc + 0.02 * rng.normal());
      out << '\n';
    }
    manifest.files.emplace_back("embeddings.txt");
  }

  // --- concreteness ratings (fillers only, on a 1-5 scale) ---------------
  {
    std::vector<std::size_t> rated(cfg.vocab_size);
    std::iota(rated.begin(), rated.end(), 0);
    for (std::size_t i = rated.size(); i-- > 1;) std::swap(rated[i], rated[rng.index(i + 1)]);
    rated.resize(cfg.rated_words);
    std::sort(rated.begin(), rated.end(), [&](auto a, auto b) { return words[a].text < words[b].text; });
    auto out = open_out(out_dir / "concreteness.tsv");
    for (auto i : rated) {
      const double mu = logistic(cfg.conc_slope * words[i].z_conc);
      const double y = beta_draw(rng, mu * cfg.conc_precision, (1.0 - mu) * cfg.conc_precision);
      out << words[i].text << '\t' << format_double(1.0 + 4.0 * y) << '\n';
    }
    manifest.files.emplace_back("concreteness.tsv");
  }

  // --- meanings (planted words) -------------------------------------------
  {
    auto out = open_out(out_dir / "meanings.tsv");
    for (std::size_t k = first_dec; k < words.size(); ++k) {
      const Word& w = words[k];
      if (rng.uniform() < cfg.meanings_missing) continue;
      const auto active = 1 + rng.poisson(std::exp(cfg.mng_base + cfg.mng_scale * w.z_mng));
      for (std::uint64_t m = 0; m < active; ++m) {
        const int first = cfg.start_year - 10 - static_cast<int>(rng.index(400));
        out << w.text << '\t' << first << '\t';
        if (rng.uniform() < 0.3) out << cfg.start_year + static_cast<int>(rng.index(200));
        out << '\n';
      }
      // Senses outside the first decade: obsolete before it or coined after it.
      const auto distractors = rng.poisson(1.0);
      for (std::uint64_t m = 0; m < distractors; ++m) {
        if (rng.uniform() < 0.5) {
          const int first = cfg.start_year - 300 + static_cast<int>(rng.index(200));
          out << w.text << '\t' << first << '\t' << first + 1 + static_cast<int>(rng.index(90)) << '\n';
        } else {
          out << w.text << '\t' << cfg.start_year + 20 + static_cast<int>(rng.index(180)) << '\t' << '\n';
        }
      }
    }
    manifest.files.emplace_back("meanings.tsv");
  }

  // --- pronunciations ------------------------------------------------------
  {
    std::vector<std::size_t> order(words.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return words[a].text < words[b].text; });
    auto out = open_out(out_dir / "pronunciations.tsv");
    for (auto i : order) out << words[i].text << '\t' << phones_of(words[i].text) << '\n';
    auto vowels = open_out(out_dir / "vowels.txt");
    auto consonants = open_out(out_dir / "consonants.txt");
    for (const auto& l : kLetters) (l.vowel ? vowels : consonants) << l.phone << '\n';
    manifest.files.emplace_back("pronunciations.tsv");
    manifest.files.emplace_back("vowels.txt");
    manifest.files.emplace_back("consonants.txt");
  }

  // --- ground truth ----------------------------------------------------------
  {
    auto out = open_out(out_dir / "truth.tsv");
    out << "word\trole\tpos\tpartner\tonset\tz_sem\tz_conc\tz_mng\tz_cdiv\n";
    for (std::size_t k = first_dec; k < words.size(); ++k) {
      const Word& w = words[k];
      const bool dec = w.role == Role::Dec;
      const std::size_t i = k - first_dec;
      std::string partner;
      if (dec) partner = words[first_dec + cfg.n_dec + i].text;
      else if (i - cfg.n_dec < cfg.n_dec) partner = words[first_dec + (i - cfg.n_dec)].text;
      out << w.text << '\t' << (dec ? "dec" : "stb") << '\t' << w.pos << '\t' << partner << '\t'
          << (dec ? format_double(w.onset) : std::string()) << '\t' << format_double(w.z_sem) << '\t'
          << format_double(w.z_conc) << '\t' << format_double(w.z_mng) << '\t' << format_double(w.z_cdiv) << '\n';
    }
    manifest.files.emplace_back("truth.tsv");
  }
  return manifest;
}

}  // namespace lexdecline
