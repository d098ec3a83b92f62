#include "lexdecline/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <optional>

#include "lexdecline/error.hpp"
#include "lexdecline/pipeline.hpp"
#include "lexdecline/util.hpp"

namespace lexdecline {
namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 1;
  fs::path out_dir = ".";
  std::optional<fs::path> in_dir;
  unsigned threads = 1;
  std::optional<fs::path> config_file;
  std::vector<std::string> overrides;

  fs::path input_dir() const { return in_dir ? *in_dir : out_dir; }
};

struct Inputs {
  std::map<std::string, std::string> given;  // flag name -> path

  // Explicit flag, else the conventional file name in the input directory
  // when it exists.
  std::optional<fs::path> resolve(const Common& c, const std::string& flag, const std::string& file) const {
    if (auto it = given.find(flag); it != given.end() && !it->second.empty()) return fs::path(it->second);
    const auto p = c.input_dir() / file;
    if (fs::exists(p)) return p;
    return std::nullopt;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out-dir", c.out_dir, "directory for outputs (and default inputs)");
  cmd->add_option("--in-dir", c.in_dir, "directory holding default-named inputs (defaults to --out-dir)");
  cmd->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--config", c.config_file, "key = value file overriding defaults");
  cmd->add_option("--set", c.overrides, "key=value override, repeatable");
}

void add_input(CLI::App* cmd, Inputs& in, const std::string& flag, const std::string& help) {
  cmd->add_option("--" + flag, in.given[flag], help);
}

PipelineConfig make_config(const Common& c) {
  PipelineConfig cfg;
  if (c.config_file) load_config_file(cfg, *c.config_file);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ArgumentError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, std::string(trim(std::string_view(kv).substr(0, eq))),
                  std::string(trim(std::string_view(kv).substr(eq + 1))));
  }
  cfg.axis.validate();
  return cfg;
}

fs::path require(const Inputs& in, const Common& c, const std::string& flag, const std::string& file,
                 std::vector<std::string>& missing) {
  if (auto p = in.resolve(c, flag, file); p && fs::exists(*p)) return *p;
  missing.push_back("--" + flag + " (default " + (c.input_dir() / file).string() + ")");
  return {};
}

void check_missing(const std::vector<std::string>& missing) {
  if (missing.empty()) return;
  std::string list;
  for (const auto& m : missing) list += "\n  " + m;
  throw DataError("missing inputs:" + list);
}

std::ofstream open_report(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexical decline analysis toolkit", "lexdecline"};
  app.require_subcommand(1);
  Common common;
  Inputs in;
  std::optional<std::size_t> n_decliners;
  std::string factor_list;
  bool covariates = false;

  auto* synth = app.add_subcommand("synth", "generate a synthetic input bundle");
  auto* rank = app.add_subcommand("rank", "rank declining and stable candidates");
  auto* match = app.add_subcommand("match", "pair decliners with stable controls");
  auto* factors = app.add_subcommand("factors", "compute the seven factors for the paired words");
  auto* analyze = app.add_subcommand("analyze", "paired tests, correlations and pair-order regression");
  auto* classify = app.add_subcommand("classify", "leave-one-out pair classification");
  auto* diachronic = app.add_subcommand("diachronic", "per-word CDiv trend regressions");
  for (auto* cmd : {synth, rank, match, factors, analyze, classify, diachronic}) add_common(cmd, common);

  for (auto* cmd : {rank, match, diachronic, factors}) {
    add_input(cmd, in, "freqs", "frequency TSV");
    add_input(cmd, in, "meta", "decade meta TSV");
  }
  add_input(match, in, "decliners", "ranked decliners TSV");
  add_input(match, in, "stables", "ranked stable TSV");
  match->add_option("--n-decliners", n_decliners, "number of top decliners to match");
  for (auto* cmd : {factors, analyze, classify, diachronic}) add_input(cmd, in, "pairs", "pairs TSV");
  for (auto* cmd : {analyze, classify}) add_input(cmd, in, "factors", "factor TSV");
  for (auto* cmd : {factors, diachronic}) add_input(cmd, in, "tokens-dir", "directory of per-decade token files");
  add_input(factors, in, "embeddings", "word vectors");
  add_input(factors, in, "concreteness", "concreteness ratings TSV");
  add_input(factors, in, "meanings", "meaning intervals TSV");
  add_input(factors, in, "pronunciations", "pronunciation lexicon TSV");
  add_input(factors, in, "vowels", "vowel symbols, one per line");
  add_input(factors, in, "consonants", "consonant symbols, one per line");
  factors->add_option("--factors", factor_list, "comma-separated factors to compute (default: all)");
  analyze->add_flag("--covariates", covariates, "add frequency and length differences as predictors");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  PipelineConfig cfg;
  try {
    cfg = make_config(common);
    if (n_decliners) cfg.match.max_decliners = *n_decliners;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::array<bool, kFactorCount> enabled{};
  if (factor_list.empty()) {
    enabled.fill(true);
  } else {
    for (auto name : split(factor_list, ',')) {
      auto f = factor_from_name(std::string(trim(name)));
      if (!f) {
        err << "error: unknown factor '" << trim(name) << "'\n";
        return 2;
      }
      enabled[*f] = true;
    }
  }

  const auto* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    fs::create_directories(common.out_dir);
    RunManifest manifest(name);
    manifest.value("seed", std::to_string(common.seed));
    std::vector<std::string> missing;

    if (name == "synth") {
      auto sc = cfg.synth;
      sc.seed = common.seed;
      const auto m = generate(sc, common.out_dir);
      manifest.settings(cfg, {"synth."});
      auto o = open_report(common.out_dir / "synth_manifest.txt");
      o << manifest.header();
      for (const auto& f : m.files) o << f.generic_string() << '\t' << hex64(fnv1a64_file(common.out_dir / f)) << '\n';
      out << "wrote " << m.files.size() << " files to " << common.out_dir.string() << '\n';
      return 0;
    }

    if (name == "rank") {
      const auto freqs = require(in, common, "freqs", "freqs.tsv", missing);
      const auto meta_path = require(in, common, "meta", "meta.tsv", missing);
      check_missing(missing);
      manifest.input("freqs", freqs);
      manifest.input("meta", meta_path);
      manifest.settings(cfg, {"axis.", "filter."});
      const auto meta = load_meta(meta_path, cfg.axis);
      const auto words = load_frequencies(freqs, meta);
      const auto dec = rank_decliners(words, cfg.filter, common.threads);
      const auto stb = rank_stable(words, cfg.filter, common.threads);
      write_candidates(common.out_dir / "decliners.tsv", dec, manifest.header());
      write_candidates(common.out_dir / "stables.tsv", stb, manifest.header());
      out << dec.size() << " decline candidates, " << stb.size() << " stable candidates\n";
      return 0;
    }

    if (name == "match") {
      const auto freqs = require(in, common, "freqs", "freqs.tsv", missing);
      const auto meta_path = require(in, common, "meta", "meta.tsv", missing);
      const auto dec_path = require(in, common, "decliners", "decliners.tsv", missing);
      const auto stb_path = require(in, common, "stables", "stables.tsv", missing);
      check_missing(missing);
      for (auto [role, p] : {std::pair{"freqs", &freqs}, std::pair{"meta", &meta_path},
                             std::pair{"decliners", &dec_path}, std::pair{"stables", &stb_path}})
        manifest.input(role, *p);
      manifest.settings(cfg, {"axis.", "match."});
      const auto meta = load_meta(meta_path, cfg.axis);
      const auto words = load_frequencies(freqs, meta);
      const auto result = match_pairs(read_candidates(dec_path), read_candidates(stb_path), words, cfg.match);
      write_pairs(common.out_dir / "pairs.tsv", result.pairs, manifest.header());
      const auto v = validate_matching(result.pairs);
      auto o = open_report(common.out_dir / "match_report.txt");
      o << manifest.header() << "pairs: " << result.pairs.size() << '\n'
        << "unmatched: " << result.unmatched.size() << '\n'
        << "length_deficit: " << result.length_deficit << '\n'
        << "repair_swaps: " << result.repair_swaps << '\n'
        << "frequency_p: " << format_double(v.frequency.p_two_sided) << '\n'
        << "length_p: " << format_double(v.length.p_two_sided) << '\n'
        << "validation: " << (v.pass ? "pass" : "fail") << '\n';
      for (const auto& w : result.unmatched) o << "unmatched_word: " << w << '\n';
      out << result.pairs.size() << " pairs, validation " << (v.pass ? "pass" : "fail") << '\n';
      return 0;
    }

    if (name == "factors") {
      const auto pairs_path = require(in, common, "pairs", "pairs.tsv", missing);
      FactorInputs fi;
      fi.embeddings = in.resolve(common, "embeddings", "embeddings.txt");
      fi.concreteness = in.resolve(common, "concreteness", "concreteness.tsv");
      fi.meanings = in.resolve(common, "meanings", "meanings.tsv");
      fi.tokens_dir = in.resolve(common, "tokens-dir", "tokens");
      fi.pronunciations = in.resolve(common, "pronunciations", "pronunciations.tsv");
      fi.vowels = in.resolve(common, "vowels", "vowels.txt");
      fi.consonants = in.resolve(common, "consonants", "consonants.txt");
      fi.freqs = in.resolve(common, "freqs", "freqs.tsv");
      fi.meta = in.resolve(common, "meta", "meta.tsv");
      for (const auto& m : missing_factor_inputs(fi, enabled)) missing.push_back(m);
      check_missing(missing);
      manifest.input("pairs", pairs_path);
      for (auto [role, p] : {std::pair{"embeddings", &fi.embeddings}, std::pair{"concreteness", &fi.concreteness},
                             std::pair{"meanings", &fi.meanings}, std::pair{"tokens", &fi.tokens_dir},
                             std::pair{"pronunciations", &fi.pronunciations}, std::pair{"vowels", &fi.vowels},
                             std::pair{"consonants", &fi.consonants}, std::pair{"freqs", &fi.freqs},
                             std::pair{"meta", &fi.meta}})
        if (*p) manifest.input(role, **p);
      std::string on;
      for (std::size_t f = 0; f < kFactorCount; ++f)
        if (enabled[f]) on += (on.empty() ? "" : ",") + std::string(kFactorNames[f]);
      manifest.value("factors", on);
      manifest.settings(cfg, {"axis.", "context.", "semdens.", "conc.", "meanings.", "phon."});
      const auto pairs = read_pairs(pairs_path);
      const auto table = compute_factors(pairs, fi, enabled, cfg, common.seed, common.threads);
      write_factors(common.out_dir / "factors.tsv", table, manifest.header());
      out << table.rows.size() << " words, " << table.notes.size() << " notes\n";
      return 0;
    }

    if (name == "analyze" || name == "classify") {
      const auto pairs_path = require(in, common, "pairs", "pairs.tsv", missing);
      const auto factors_path = require(in, common, "factors", "factors.tsv", missing);
      check_missing(missing);
      manifest.input("pairs", pairs_path);
      manifest.input("factors", factors_path);
      const auto pairs = read_pairs(pairs_path);
      const auto table = read_factors(factors_path);
      if (name == "analyze") {
        manifest.value("covariates", covariates ? "yes" : "no");
        manifest.settings(cfg, {"correlation.", "logistic."});
        const auto rep = analyze_pairs(pairs, table, cfg, common.seed, covariates);
        write_analysis(common.out_dir, rep, manifest.header());
        out << "pseudo_r2 " << format_double(rep.logistic.pseudo_r2) << '\n';
      } else {
        manifest.settings(cfg, {"classify."});
        std::vector<std::string> names;
        const auto lookup = scaled_factor_lookup(pairs, table, &names);
        const double acc = loo_classify(pairs, lookup, common.seed, cfg.classify_ridge, common.threads);
        auto o = open_report(common.out_dir / "classify.txt");
        o << manifest.header() << "pairs: " << pairs.size() << '\n' << "features:";
        for (const auto& n : names) o << ' ' << n;
        o << '\n' << "accuracy: " << format_double(acc) << '\n';
        out << "accuracy " << format_double(acc) << '\n';
      }
      return 0;
    }

    if (name == "diachronic") {
      const auto pairs_path = require(in, common, "pairs", "pairs.tsv", missing);
      const auto freqs = require(in, common, "freqs", "freqs.tsv", missing);
      const auto meta_path = require(in, common, "meta", "meta.tsv", missing);
      const auto tokens = require(in, common, "tokens-dir", "tokens", missing);
      check_missing(missing);
      manifest.input("pairs", pairs_path);
      manifest.input("freqs", freqs);
      manifest.input("meta", meta_path);
      manifest.input("tokens", tokens);
      manifest.settings(cfg, {"axis.", "context.", "diachronic."});
      const auto pairs = read_pairs(pairs_path);
      const auto rep = run_diachronic(pairs, freqs, meta_path, tokens, cfg, common.threads);
      write_diachronic(common.out_dir, pairs, rep, manifest.header());
      out << "mean beta3 dec " << format_double(rep.comparison.dec.mean) << ", stb "
          << format_double(rep.comparison.stb.mean) << ", paired p "
          << format_double(rep.comparison.paired.p_two_sided) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace lexdecline
