#include "lexdecline/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <variant>

#include "lexdecline/distribution.hpp"
#include "lexdecline/error.hpp"
#include "lexdecline/phonology.hpp"
#include "lexdecline/rng.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {

// ---------------------------------------------------------------------------
// Settings
// ---------------------------------------------------------------------------

namespace {

using Slot = std::variant<std::size_t*, double*, int*, long*>;

std::map<std::string, Slot> slots(PipelineConfig& c) {
  auto& s = c.synth;
  return {
      {"axis.decades", &c.axis.count},
      {"axis.start_year", &c.axis.start_year},
      {"filter.min_length", &c.filter.min_length},
      {"filter.min_initial_relfreq", &c.filter.min_initial_relfreq},
      {"filter.min_crossing", &c.filter.min_crossing},
      {"filter.max_stable_mse", &c.filter.max_stable_mse},
      {"match.freq_tolerance", &c.match.freq_tolerance},
      {"match.max_length_delta", &c.match.max_length_delta},
      {"match.length_budget", &c.match.length_budget},
      {"match.max_decliners", &c.match.max_decliners},
      {"match.repair_factor", &c.match.repair_factor},
      {"context.vocab_size", &c.context_vocab},
      {"context.head_exclude", &c.head_exclude},
      {"semdens.k", &c.semdens_k},
      {"conc.clamp_epsilon", &c.conc.clamp_epsilon},
      {"conc.gradient_tolerance", &c.conc.gradient_tolerance},
      {"conc.max_iterations", &c.conc.max_iterations},
      {"conc.holdout", &c.conc_holdout},
      {"meanings.start_year", &c.meanings_window.start},
      {"meanings.end_year", &c.meanings_window.end},
      {"phon.sample_size", &c.phon_sample_size},
      {"phon.alpha", &c.phon_alpha},
      {"correlation.alpha", &c.correlation_alpha},
      {"logistic.max_iterations", &c.logistic.max_iterations},
      {"logistic.tolerance", &c.logistic.tolerance},
      {"logistic.separation_limit", &c.logistic.separation_limit},
      {"classify.ridge", &c.classify_ridge},
      {"diachronic.min_decades", &c.diachronic_min_decades},
      {"synth.vocab_size", &s.vocab_size},
      {"synth.n_dec", &s.n_dec},
      {"synth.n_stb", &s.n_stb},
      {"synth.decades", &s.decades},
      {"synth.start_year", &s.start_year},
      {"synth.zipf_exponent", &s.zipf_exponent},
      {"synth.context_vocab", &s.context_vocab},
      {"synth.head_exclude", &s.head_exclude},
      {"synth.min_initial_freq", &s.min_initial_freq},
      {"synth.max_initial_freq", &s.max_initial_freq},
      {"synth.min_onset", &s.min_onset},
      {"synth.max_onset", &s.max_onset},
      {"synth.decline_floor", &s.decline_floor},
      {"synth.freq_noise", &s.freq_noise},
      {"synth.stable_noise", &s.stable_noise},
      {"synth.filler_noise", &s.filler_noise},
      {"synth.partner_freq_spread", &s.partner_freq_spread},
      {"synth.dimension", &s.dimension},
      {"synth.clusters", &s.clusters},
      {"synth.cluster_noise", &s.cluster_noise},
      {"synth.sem_gap", &s.sem_gap},
      {"synth.sem_scale", &s.sem_scale},
      {"synth.conc_dimensions", &s.conc_dimensions},
      {"synth.conc_gap", &s.conc_gap},
      {"synth.conc_slope", &s.conc_slope},
      {"synth.conc_precision", &s.conc_precision},
      {"synth.rated_words", &s.rated_words},
      {"synth.mng_gap", &s.mng_gap},
      {"synth.mng_base", &s.mng_base},
      {"synth.mng_scale", &s.mng_scale},
      {"synth.meanings_missing", &s.meanings_missing},
      {"synth.cdiv_gap", &s.cdiv_gap},
      {"synth.cdiv_base", &s.cdiv_base},
      {"synth.cdiv_scale", &s.cdiv_scale},
      {"synth.cdiv_drift", &s.cdiv_drift},
      {"synth.context_scale", &s.context_scale},
      {"synth.filler_tokens", &s.filler_tokens},
  };
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  const std::string_view v = trim(value);
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    if (v == "inf") return std::numeric_limits<T>::infinity();
  }
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ArgumentError("bad value '" + value + "' for " + key);
  return out;
}

}  // namespace

void apply_setting(PipelineConfig& config, const std::string& key, const std::string& value) {
  auto table = slots(config);
  auto it = table.find(key);
  if (it == table.end()) throw ArgumentError("unknown configuration key '" + key + "'");
  std::visit([&](auto* p) { *p = parse_number<std::remove_pointer_t<decltype(p)>>(key, value); }, it->second);
}

void load_config_file(PipelineConfig& config, const std::filesystem::path& path) {
  const std::string p = path.string();
  if (!std::filesystem::exists(path)) throw ArgumentError("config file not found: " + p);
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ArgumentError(p + ":" + std::to_string(n) + ": expected key = value");
    try {
      apply_setting(config, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    } catch (const ArgumentError& e) {
      throw ArgumentError(p + ":" + std::to_string(n) + ": " + e.what());
    }
  });
}

std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& config) {
  auto copy = config;
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, slot] : slots(copy)) {
    std::string v = std::visit(
        [](auto* p) -> std::string {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_floating_point_v<T>) return format_double(*p);
          else return std::to_string(*p);
        },
        slot);
    out.emplace_back(key, v);
  }
  return out;
}

void RunManifest::input(const std::string& role, const std::filesystem::path& path) {
  std::string digest;
  if (std::filesystem::is_directory(path)) {
    std::uint64_t h = fnv1a64("");
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(path))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) h = fnv1a64(f.filename().string() + hex64(fnv1a64_file(f)), h);
    digest = hex64(h);
  } else {
    digest = hex64(fnv1a64_file(path));
  }
  inputs_.emplace_back(role, path.filename().string() + " fnv1a64=" + digest);
}

void RunManifest::settings(const PipelineConfig& config, const std::vector<std::string>& prefixes) {
  for (const auto& [k, v] : describe(config))
    for (const auto& p : prefixes)
      if (k.rfind(p, 0) == 0) {
        values_.emplace_back(k, v);
        break;
      }
}

std::string RunManifest::header() const {
  std::ostringstream out;
  out << "# lexdecline " << kVersion << '\n' << "# command: " << command_ << '\n';
  for (const auto& [k, v] : inputs_) out << "# input " << k << ": " << v << '\n';
  for (const auto& [k, v] : values_) out << "# " << k << ": " << v << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Factors
// ---------------------------------------------------------------------------

std::optional<Factor> factor_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kFactorCount; ++i) {
    std::string a = kFactorNames[i], b = name;
    std::transform(a.begin(), a.end(), a.begin(), ::tolower);
    std::transform(b.begin(), b.end(), b.begin(), ::tolower);
    if (a == b) return static_cast<Factor>(i);
  }
  return std::nullopt;
}

std::vector<std::string> missing_factor_inputs(const FactorInputs& in, const std::array<bool, kFactorCount>& on) {
  std::vector<std::string> out;
  auto need = [&](Factor f, const std::optional<std::filesystem::path>& p, const char* flag) {
    if (on[f] && !p) out.push_back(std::string(kFactorNames[f]) + ": " + flag);
  };
  need(SemDens, in.embeddings, "--embeddings");
  need(Conc, in.embeddings, "--embeddings");
  need(Conc, in.concreteness, "--concreteness");
  need(NMngs, in.meanings, "--meanings");
  need(CDiv, in.tokens_dir, "--tokens-dir");
  for (Factor f : {PhonTyp, PhonDens, PhonComp}) {
    need(f, in.pronunciations, "--pronunciations");
    need(f, in.vowels, "--vowels");
  }
  need(PhonTyp, in.freqs, "--freqs");
  need(PhonTyp, in.meta, "--meta");
  return out;
}

namespace {

std::vector<std::string> pair_words(std::span<const MatchedPair> pairs) {
  std::set<std::string> s;
  for (const auto& p : pairs) {
    s.insert(p.dec);
    s.insert(p.stb);
  }
  return {s.begin(), s.end()};
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

FactorTable compute_factors(std::span<const MatchedPair> pairs, const FactorInputs& in,
                            const std::array<bool, kFactorCount>& enabled, const PipelineConfig& config,
                            std::uint64_t seed, unsigned threads) {
  if (auto missing = missing_factor_inputs(in, enabled); !missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += "\n  " + m;
    throw ArgumentError("missing inputs:" + list);
  }
  const auto words = pair_words(pairs);
  FactorTable table;
  table.enabled = enabled;
  for (const auto& w : words) table.rows[w];
  auto column = [&](Factor f, const std::function<std::optional<double>(const std::string&)>& fn) {
    std::vector<std::optional<double>> vals(words.size());
    parallel_for(words.size(), threads, [&](std::size_t i) { vals[i] = fn(words[i]); });
    for (std::size_t i = 0; i < words.size(); ++i) table.rows[words[i]].values[f] = vals[i];
  };

  std::optional<EmbeddingSpace> space;
  if (enabled[SemDens] || enabled[Conc]) space = load_embeddings(*in.embeddings);

  if (enabled[SemDens])
    column(SemDens, [&](const std::string& w) { return semantic_density(w, *space, config.semdens_k); });

  if (enabled[Conc]) {
    const auto ratings = load_concreteness(*in.concreteness);
    if (ratings.rescaled)
      table.notes.push_back("Conc: ratings rescaled from [" + fmt(ratings.source_min) + ", " +
                            fmt(ratings.source_max) + "] to [0, 1]");
    std::vector<std::string> rated;
    for (const auto& [w, r] : ratings.ratings)
      if (space->contains(w)) rated.push_back(w);
    if (rated.size() < 10) throw DataError("Conc: fewer than 10 rated words have embeddings");
    Rng rng(seed ^ 0x636f6e63ULL);
    for (std::size_t i = rated.size(); i-- > 1;) std::swap(rated[i], rated[rng.index(i + 1)]);
    const auto n_hold = static_cast<std::size_t>(std::floor(config.conc_holdout * static_cast<double>(rated.size())));
    const std::size_t n_fit = rated.size() - n_hold;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n_fit), static_cast<Eigen::Index>(space->dimension()));
    std::vector<double> y(n_fit);
    for (std::size_t i = 0; i < n_fit; ++i) {
      X.row(static_cast<Eigen::Index>(i)) = space->vector(*space->index_of(rated[i])).transpose();
      y[i] = ratings.ratings.at(rated[i]);
    }
    const auto model = fit_beta_regression(X, y, config.conc);
    table.notes.push_back("Conc: beta regression on " + std::to_string(n_fit) + " rated words, phi " +
                          fmt(model.phi) + ", " + std::to_string(model.iterations) + " iterations");
    for (const auto& w : model.warnings) table.notes.push_back("Conc: " + w);
    if (n_hold >= 3) {
      std::map<std::string, double> held;
      for (std::size_t i = n_fit; i < rated.size(); ++i) held[rated[i]] = ratings.ratings.at(rated[i]);
      table.notes.push_back("Conc: held-out Pearson r " + fmt(eval_concreteness(model, *space, held)) + " over " +
                            std::to_string(n_hold) + " words");
    }
    column(Conc, [&](const std::string& w) { return predict_concreteness(w, *space, model); });
  }

  if (enabled[NMngs]) {
    const auto db = load_meanings(*in.meanings);
    column(NMngs, [&](const std::string& w) -> std::optional<double> {
      if (auto n = num_meanings(w, db, config.meanings_window)) return static_cast<double>(*n);
      return std::nullopt;
    });
  }

  if (enabled[CDiv]) {
    ContextTableOptions opts{config.context_vocab, config.head_exclude,
                             std::unordered_set<std::string>(words.begin(), words.end())};
    const auto ctx = build_context_table(token_file(*in.tokens_dir, 0), 0, opts);
    column(CDiv, [&](const std::string& w) -> std::optional<double> {
      const auto* c = ctx.find(w);
      if (!c || c->empty()) return std::nullopt;
      return contextual_diversity(w, ctx);
    });
  }

  if (enabled[PhonTyp] || enabled[PhonDens] || enabled[PhonComp]) {
    PhoneSet phones{load_symbol_set(*in.vowels), std::nullopt};
    if (in.consonants) phones.consonants = load_symbol_set(*in.consonants);
    const auto lex = load_pronunciations(*in.pronunciations, phones);
    for (const auto& w : lex.warnings) table.notes.push_back("pronunciations: " + w);
    auto find = [&](const std::string& w) -> const Transcription* {
      auto it = lex.entries.find(w);
      return it == lex.entries.end() ? nullptr : &it->second;
    };
    if (enabled[PhonTyp]) {
      const auto meta = load_meta(*in.meta, config.axis);
      const auto series = load_frequencies(*in.freqs, meta);
      std::map<std::string, double> freqs;
      for (const auto& s : series) freqs[s.word] += s.initial_rel();
      const auto lm = train_phoneme_lm(lex.entries, freqs, config.phon_sample_size, seed, config.phon_alpha);
      table.notes.push_back("PhonTyp: trigram model over " + std::to_string(lm.inventory().size()) +
                            " symbols from " + std::to_string(config.phon_sample_size) + " sampled tokens");
      column(PhonTyp, [&](const std::string& w) -> std::optional<double> {
        const auto* t = find(w);
        if (!t) return std::nullopt;
        return phonological_typicality(*t, lm);
      });
    }
    if (enabled[PhonDens]) {
      std::vector<Transcription> all;
      all.reserve(lex.entries.size());
      for (const auto& [w, t] : lex.entries) all.push_back(t);
      column(PhonDens, [&](const std::string& w) -> std::optional<double> {
        const auto* t = find(w);
        if (!t) return std::nullopt;
        return phonological_density(*t, all);
      });
    }
    if (enabled[PhonComp]) {
      std::vector<std::string> degenerate;
      column(PhonComp, [&](const std::string& w) -> std::optional<double> {
        const auto* t = find(w);
        if (!t) return std::nullopt;
        return phonological_complexity(*t).value;
      });
      for (const auto& w : words)
        if (const auto* t = find(w); t && phonological_complexity(*t).degenerate)
          table.notes.push_back("PhonComp: '" + w + "' has no vowel nucleus, value 0");
    }
  }

  // Mean imputation per factor over the pair words.
  for (std::size_t f = 0; f < kFactorCount; ++f) {
    if (!enabled[f]) continue;
    std::map<std::string, std::optional<double>> vals;
    std::size_t missing = 0;
    for (const auto& [w, row] : table.rows) {
      vals[w] = row.values[f];
      missing += !row.values[f];
    }
    if (missing == vals.size()) {
      table.notes.push_back(std::string(kFactorNames[f]) + ": no word has a value; factor left missing");
      continue;
    }
    if (missing == 0) continue;
    for (const auto& [w, imp] : impute_mean(vals)) {
      auto& row = table.rows[w];
      row.values[f] = imp.value;
      row.imputed[f] = imp.imputed;
    }
    table.notes.push_back(std::string(kFactorNames[f]) + ": " + std::to_string(missing) + " of " +
                          std::to_string(vals.size()) + " words imputed with the mean");
  }
  return table;
}

void write_factors(const std::filesystem::path& path, const FactorTable& table, const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << header;
  for (const auto& n : table.notes) out << "# note: " << n << '\n';
  out << "word";
  for (auto n : kFactorNames) out << '\t' << n;
  out << "\timputed\n";
  for (const auto& [w, row] : table.rows) {
    out << w;
    for (std::size_t f = 0; f < kFactorCount; ++f) out << '\t' << (row.values[f] ? fmt(*row.values[f]) : "NA");
    std::string imp;
    for (std::size_t f = 0; f < kFactorCount; ++f)
      if (row.imputed[f]) imp += (imp.empty() ? "" : ",") + std::string(kFactorNames[f]);
    out << '\t' << (imp.empty() ? "-" : imp) << '\n';
  }
}

FactorTable read_factors(const std::filesystem::path& path) {
  const std::string p = path.string();
  FactorTable table;
  bool header_seen = false;
  for_each_line(path, [&](std::size_t n, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto f = split(line, '\t');
    if (!header_seen) {
      if (f.size() != kFactorCount + 2 || f[0] != "word") throw ParseError(p, n, "unexpected factor table header");
      header_seen = true;
      return;
    }
    if (f.size() != kFactorCount + 2) throw ParseError(p, n, "expected " + std::to_string(kFactorCount + 2) + " columns");
    FactorRow row;
    for (std::size_t i = 0; i < kFactorCount; ++i) {
      if (f[i + 1] == "NA") continue;
      row.values[i] = parse_double(f[i + 1], p, n);
      table.enabled[i] = true;
    }
    if (f.back() != "-") {
      for (auto name : split(f.back(), ',')) {
        auto fac = factor_from_name(std::string(name));
        if (!fac) throw ParseError(p, n, "unknown factor '" + std::string(name) + "' in imputed list");
        row.imputed[*fac] = true;
      }
    }
    if (!table.rows.emplace(std::string(f[0]), row).second) throw ParseError(p, n, "duplicate word");
  });
  if (!header_seen) throw ParseError(p, 0, "missing header");
  return table;
}

// ---------------------------------------------------------------------------
// Analyses
// ---------------------------------------------------------------------------

namespace {

// Factors with a value for every pair word.
std::vector<std::size_t> usable_factors(std::span<const MatchedPair> pairs, const FactorTable& factors) {
  for (const auto& p : pairs)
    for (const auto* w : {&p.dec, &p.stb})
      if (!factors.rows.count(*w)) throw DataError("no factor values for '" + *w + "'");
  std::vector<std::size_t> out;
  for (std::size_t f = 0; f < kFactorCount; ++f) {
    bool ok = true;
    for (const auto& p : pairs)
      ok = ok && factors.rows.at(p.dec).values[f] && factors.rows.at(p.stb).values[f];
    if (ok) out.push_back(f);
  }
  if (out.empty()) throw DataError("no factor has values for every pair word");
  return out;
}

}  // namespace

FactorLookup scaled_factor_lookup(std::span<const MatchedPair> pairs, const FactorTable& factors,
                                  std::vector<std::string>* names, bool covariates) {
  const auto use = usable_factors(pairs, factors);
  const auto words = pair_words(pairs);
  std::map<std::string, std::pair<double, double>> covs;  // word -> (ln freq, length)
  for (const auto& p : pairs) {
    covs[p.dec] = {std::log(p.dec_freq), static_cast<double>(p.dec_len)};
    covs[p.stb] = {std::log(p.stb_freq), static_cast<double>(p.stb_len)};
  }
  std::vector<std::vector<double>> columns;
  std::vector<std::string> cols;
  auto add = [&](const std::string& name, std::vector<double> raw) {
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    if (!(*hi > *lo)) return;  // constant: carries no information
    columns.push_back(minmax_scale(raw));
    cols.push_back(name);
  };
  for (auto f : use) {
    std::vector<double> raw;
    for (const auto& w : words) raw.push_back(*factors.rows.at(w).values[f]);
    add(kFactorNames[f], std::move(raw));
  }
  if (covariates) {
    std::vector<double> lf, len;
    for (const auto& w : words) {
      lf.push_back(covs.at(w).first);
      len.push_back(covs.at(w).second);
    }
    add("LogFreq", std::move(lf));
    add("Length", std::move(len));
  }
  if (columns.empty()) throw DataError("every factor is constant over the pair words");
  FactorLookup out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<double> v;
    for (const auto& c : columns) v.push_back(c[i]);
    out.emplace(words[i], std::move(v));
  }
  if (names) *names = cols;
  return out;
}

AnalysisReport analyze_pairs(std::span<const MatchedPair> pairs, const FactorTable& factors,
                             const PipelineConfig& config, std::uint64_t seed, bool covariates) {
  if (pairs.size() < 3) throw DataError("analysis needs at least 3 pairs");
  AnalysisReport rep;
  rep.pairs = pairs.size();
  const auto use = usable_factors(pairs, factors);
  for (auto f : use) {
    FactorComparison c;
    c.name = kFactorNames[f];
    std::vector<double> d, s;
    for (const auto& p : pairs) {
      d.push_back(*factors.rows.at(p.dec).values[f]);
      s.push_back(*factors.rows.at(p.stb).values[f]);
    }
    c.dec = summarize(d);
    c.stb = summarize(s);
    c.test = wilcoxon_signed_rank(d, s);
    rep.factors.push_back(c.name);
    rep.comparisons.push_back(std::move(c));
  }

  const auto words = pair_words(pairs);
  Eigen::MatrixXd data(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(use.size()));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < use.size(); ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *factors.rows.at(words[i]).values[use[j]];
  rep.correlations = pearson_matrix(data, rep.factors, config.correlation_alpha);

  std::vector<std::string> names;
  const auto lookup = scaled_factor_lookup(pairs, factors, &names, covariates);
  const auto items = build_pair_items(pairs, lookup, seed);
  rep.logistic = fit_logistic(std::span<const PairItem>(items), names, config.logistic);
  for (const auto& f : rep.factors)
    if (std::find(names.begin(), names.end(), f) == names.end())
      rep.logistic.warnings.push_back(f + " is constant over the pair words and was left out");
  return rep;
}

void write_analysis(const std::filesystem::path& dir, const AnalysisReport& rep, const std::string& header) {
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    out << header;
    return out;
  };
  auto method = [](const WilcoxonResult& r) { return r.method == WilcoxonMethod::Normal ? "normal" : "exact"; };
  auto marker = [](double p) { return p < 0.001 ? "**" : p < 0.01 ? "*" : ""; };
  {
    auto out = open("table2.tsv");
    out << "factor\tdec_mean\tdec_sd\tstb_mean\tstb_sd\tn_effective\tw_plus\tp\tmethod\tmark\n";
    for (const auto& c : rep.comparisons)
      out << c.name << '\t' << fmt(c.dec.mean) << '\t' << fmt(c.dec.sd) << '\t' << fmt(c.stb.mean) << '\t'
          << fmt(c.stb.sd) << '\t' << c.test.n_effective << '\t' << fmt(c.test.w_plus) << '\t'
          << fmt(c.test.p_two_sided) << '\t' << method(c.test) << '\t' << marker(c.test.p_two_sided) << '\n';
  }
  {
    const auto& cr = rep.correlations;
    auto out = open("correlations.tsv");
    out << "# bonferroni threshold: " << fmt(cr.alpha / static_cast<double>(std::max<std::size_t>(cr.tests, 1)))
        << " over " << cr.tests << " tests\n";
    out << "factor_a\tfactor_b\tr\tp\tsignificant\n";
    for (std::size_t i = 0; i < cr.names.size(); ++i)
      for (std::size_t j = i + 1; j < cr.names.size(); ++j) {
        const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
        const bool undefined = std::isnan(cr.r(a, b));
        out << cr.names[i] << '\t' << cr.names[j] << '\t' << (undefined ? "NA" : fmt(cr.r(a, b))) << '\t'
            << (undefined ? "NA" : fmt(cr.p(a, b))) << '\t' << (cr.significant[i][j] ? "yes" : "no") << '\n';
      }
  }
  const auto& lr = rep.logistic;
  {
    auto out = open("table3.tsv");
    out << "predictor\tcoef\tse\tz\tp\n";
    for (std::size_t i = 0; i < lr.names.size(); ++i)
      out << lr.names[i] << '\t' << fmt(lr.coef[i]) << '\t' << fmt(lr.se[i]) << '\t' << fmt(lr.stat[i]) << '\t'
          << fmt(lr.p[i]) << '\n';
  }
  {
    auto out = open("report.txt");
    out << "pairs: " << rep.pairs << '\n'
        << "factors: " << rep.factors.size() << '\n'
        << "pseudo_r2: " << fmt(lr.pseudo_r2) << '\n'
        << "ll_model: " << fmt(lr.ll_model) << '\n'
        << "ll_null: " << fmt(lr.ll_null) << '\n'
        << "iterations: " << lr.iterations << '\n';
    for (const auto& c : rep.comparisons)
      out << "paired " << c.name << ": " << (c.dec.mean > c.stb.mean ? "dec > stb" : c.dec.mean < c.stb.mean ? "dec < stb" : "dec = stb")
          << ", p " << fmt(c.test.p_two_sided) << (c.test.degenerate ? " (degenerate)" : "") << '\n';
    for (const auto& w : lr.warnings) out << "warning: " << w << '\n';
  }
}

DiachronicReport run_diachronic(std::span<const MatchedPair> pairs, const std::filesystem::path& freqs,
                                const std::filesystem::path& meta_path, const std::filesystem::path& tokens_dir,
                                const PipelineConfig& config, unsigned threads) {
  const auto meta = load_meta(meta_path, config.axis);
  const auto series = load_frequencies(freqs, meta);
  const auto words = pair_words(pairs);
  std::map<std::pair<std::string, std::string>, const WordSeries*> by_key;
  for (const auto& s : series) by_key[{s.word, s.pos}] = &s;
  std::map<std::string, const WordSeries*> word_series;
  for (const auto& p : pairs) {
    for (auto [w, pos] : {std::pair{&p.dec, &p.pos}, std::pair{&p.stb, &p.pos}}) {
      auto it = by_key.find({*w, *pos});
      if (it == by_key.end()) throw DataError("no frequency series for '" + *w + "' (" + *pos + ")");
      word_series[*w] = it->second;
    }
  }

  const std::size_t T = config.axis.count;
  std::vector<ContextTable> tables(T);
  const std::unordered_set<std::string> targets(words.begin(), words.end());
  parallel_for(T, threads, [&](std::size_t t) {
    tables[t] = build_context_table(token_file(tokens_dir, t), t,
                                    ContextTableOptions{config.context_vocab, config.head_exclude, targets});
  });
  std::vector<const ContextTable*> ptrs;
  for (const auto& t : tables) ptrs.push_back(&t);

  std::vector<std::optional<DiachronicFit>> fits(words.size());
  parallel_for(words.size(), threads, [&](std::size_t i) {
    const auto cd = cdiv_series(words[i], ptrs);
    std::size_t defined = 0;
    for (const auto& v : cd) defined += v.has_value();
    if (defined < config.diachronic_min_decades) return;
    fits[i] = fit_diachronic(words[i], cd, meta, word_series.at(words[i])->rel, config.diachronic_min_decades);
  });
  DiachronicReport rep;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (fits[i]) rep.fits.push_back(std::move(*fits[i]));
    else rep.excluded.push_back(words[i]);
  }
  rep.comparison = compare_beta3(pairs, rep.fits);
  return rep;
}

void write_diachronic(const std::filesystem::path& dir, std::span<const MatchedPair> pairs,
                      const DiachronicReport& rep, const std::string& header) {
  write_beta3_table(dir / "beta3.tsv", pairs, rep.fits, header);
  std::ofstream out(dir / "diachronic_report.txt", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "diachronic_report.txt").string());
  const auto& c = rep.comparison;
  out << header << "pairs_total: " << c.total_pairs << '\n'
      << "pairs_included: " << c.included_pairs << '\n'
      << "pairs_excluded: " << c.excluded_pairs << '\n'
      << "words_without_fit: " << rep.excluded.size() << '\n';
  for (auto [name, s] : {std::pair{"dec", &c.dec}, std::pair{"stb", &c.stb}})
    out << "box " << name << ": n " << s->n << " mean " << fmt(s->mean) << " sd " << fmt(s->sd) << " min "
        << fmt(s->min) << " q1 " << fmt(s->q1) << " median " << fmt(s->median) << " q3 " << fmt(s->q3) << " max "
        << fmt(s->max) << '\n';
  for (auto [name, r] : {std::pair{"paired dec-stb", &c.paired}, std::pair{"dec vs 0", &c.dec_vs_zero},
                         std::pair{"stb vs 0", &c.stb_vs_zero}})
    out << "wilcoxon " << name << ": n " << r->n_effective << " w_plus " << fmt(r->w_plus) << " p "
        << fmt(r->p_two_sided) << (r->degenerate ? " degenerate" : "") << '\n';
  std::size_t dropped_b = 0, dropped_f = 0;
  for (const auto& f : rep.fits) {
    dropped_b += f.dropped_log_books;
    dropped_f += f.dropped_frequency;
  }
  out << "fits_dropping_log_books: " << dropped_b << '\n' << "fits_dropping_freq: " << dropped_f << '\n';
}

}  // namespace lexdecline
