#include "cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/manifest.hpp"
#include "proxyrank/corpus.hpp"
#include "proxyrank/csv.hpp"
#include "proxyrank/report.hpp"
#include "proxyrank/synth.hpp"
#include "proxyrank/temporal.hpp"

namespace proxyrank::cli {

namespace fs = std::filesystem;

namespace {

struct Failure {
  int code;
  std::string message;
};

// Input stage: reading corpora, rankings and configs.
template <typename F>
auto reading(F&& f) {
  try {
    return f();
  } catch (const CorpusError& e) {
    std::string msg;
    for (const auto& issue : e.issues()) msg += issue.to_string() + "\n";
    msg += fmt::format("{} errors", e.issues().size());
    throw Failure{kInputError, msg};
  } catch (const ConfigError& e) {
    throw Failure{kInputError, e.what()};
  } catch (const InputError& e) {
    throw Failure{kInputError, e.what()};
  }
}

// Spec stage: interpreting flags and running exercises.
template <typename F>
auto computing(F&& f) {
  try {
    return f();
  } catch (const CoverageError& e) {
    throw Failure{kSpecError, e.what()};
  } catch (const InputError& e) {
    throw Failure{kSpecError, e.what()};
  }
}

std::string fx(double value, int decimals) { return report::format_fixed(value, decimals); }

std::vector<std::string> manifest_line(const std::string& digest) { return {"manifest " + digest}; }

fs::path emit(const fs::path& dir, const std::string& stem, const report::Table& table, report::Format format,
              const std::string& digest) {
  const auto path = dir / (stem + "." + std::string(report::to_string(format)));
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kInputError, "cannot write " + path.string()};
  report::write(table, format, f, format == report::Format::tsv ? manifest_line(digest) : std::vector<std::string>{});
  return path;
}

void prepare_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw Failure{kInputError, "cannot create output directory " + out};
}

Corpus load(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Failure{kInputError, "corpus directory does not exist: " + dir};
  return reading([&] { return load_corpus(fs::path(dir)); });
}

std::vector<fs::path> corpus_inputs(const std::string& dir) { return CorpusPaths::in_directory(dir).all(); }

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& dir, std::ostream& out) {
  if (!fs::is_directory(dir)) throw Failure{kInputError, "corpus directory does not exist: " + dir};
  try {
    const auto corpus = load_corpus(fs::path(dir));
    out << fmt::format("{} publications, {} journals, {} scientists, {} universities, {} SDSs, {} UDAs\n",
                       corpus.publications().size(), corpus.journals().size(), corpus.scientists().size(),
                       corpus.structure().universities.size(), corpus.structure().sds.size(),
                       corpus.structure().udas.size());
    out << "0 errors\n";
    return kOk;
  } catch (const CorpusError& e) {
    for (const auto& issue : e.issues()) out << issue.to_string() << '\n';
    out << e.issues().size() << " errors\n";
    return kInputError;
  }
}

struct CommonFlags {
  std::string period;
  double min_staff = kDefaultMinStaff;
  std::string out;
  std::string format = "tsv";
  std::string national = "pooled";
  std::string weighting = "journal";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--period", f.period, "Publication years, e.g. 2004-2006")->required();
  cmd->add_option("--min-staff", f.min_staff, "Minimum average UDA staff for ranking")->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory")->required();
  cmd->add_option("--format", f.format, "Report encoding")->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
  cmd->add_option("--national-average", f.national, "SDS reference productivity")
      ->check(CLI::IsMember({"pooled", "mean"}))
      ->capture_default_str();
  cmd->add_option("--if-weighting", f.weighting, "Impact-factor cohort weighting")
      ->check(CLI::IsMember({"journal", "publication"}))
      ->capture_default_str();
}

std::map<std::string, std::string> common_config(const CommonFlags& f) {
  return {{"period", f.period},
          {"min_staff", fmt::format("{}", f.min_staff)},
          {"format", f.format},
          {"national_average", f.national},
          {"if_weighting", f.weighting}};
}

struct RankFlags {
  std::string corpus;
  CommonFlags common;
  std::string proxy = "citations";
  std::string date;
  std::optional<int> jcr_edition;
  bool dump = false;
};

int cmd_rank(const RankFlags& f, std::ostream& out, std::ostream& err) {
  const auto format = report::parse_format(f.common.format);
  const auto spec = computing([&] {
    ExerciseSpec s;
    s.period = YearRange::parse(f.common.period);
    s.min_staff = f.common.min_staff;
    s.productivity.national_average = parse_national_average(f.common.national);
    const auto proxy = parse_proxy(f.proxy);
    if (proxy == Proxy::article_citations) {
      if (f.date.empty()) throw InputError("--proxy citations requires --date");
      s.observation = Observation::citations(Date::parse(f.date));
    } else {
      if (!f.jcr_edition) throw InputError("--proxy impact-factor requires --jcr-edition");
      s.observation = Observation::impact_factor(*f.jcr_edition, parse_weighting(f.common.weighting));
    }
    s.validate();
    return s;
  });
  const auto corpus = load(f.corpus);
  const auto result = computing([&] { return run_exercise(corpus, spec); });

  prepare_out_dir(f.common.out);
  RunManifest manifest;
  manifest.command = "rank";
  manifest.config = common_config(f.common);
  manifest.config["proxy"] = std::string(to_string(spec.observation.proxy));
  manifest.config["observation"] = spec.observation.describe();
  manifest.config["dump"] = f.dump ? "true" : "false";
  manifest.inputs = corpus_inputs(f.corpus);
  const auto digest = manifest.digest();

  const fs::path dir(f.common.out);
  manifest.outputs.push_back(emit(dir, "ranking", report::ranking_table(result.rankings), format, digest));
  manifest.outputs.push_back(emit(dir, "exclusions", report::exclusion_table(result.rankings), format, digest));
  if (f.dump) {
    const auto scores = score_corpus(corpus, spec.observation);
    {
      std::ofstream s(dir / "scores.csv", std::ios::binary);
      write_score_dump(scores, s);
    }
    {
      std::ofstream p(dir / "productivity.csv", std::ios::binary);
      write_productivity_dump(result.productivity, p);
    }
    manifest.outputs.push_back(dir / "scores.csv");
    manifest.outputs.push_back(dir / "productivity.csv");
  }
  manifest.write(dir / "manifest.json");

  for (const auto& n : result.notices) err << "notice: " << n << '\n';
  for (const auto& r : result.rankings)
    out << fmt::format("{}: {} ranked, {} excluded\n", r.uda_id, r.entries.size(), r.excluded.size());
  return kOk;
}

struct CompareFlags {
  std::string a;
  std::string b;
  std::string out;
  std::string format = "tsv";
  std::string correlation = "spearman";
};

int cmd_compare(const CompareFlags& f, std::ostream& out, std::ostream& err) {
  const auto format = report::parse_format(f.format);
  const auto method = computing([&] { return parse_correlation(f.correlation); });
  const auto ra = reading([&] { return report::read_rankings(f.a); });
  const auto rb = reading([&] { return report::read_rankings(f.b); });

  std::vector<RankingComparison> comparisons;
  report::Table shifts;
  for (const auto& a : ra) {
    auto it = std::find_if(rb.begin(), rb.end(), [&](const Ranking& r) { return r.uda_id == a.uda_id; });
    if (it == rb.end()) {
      err << fmt::format("notice: UDA '{}' only in {}\n", a.uda_id, f.a);
      continue;
    }
    auto cmp = reading([&] { return compare_rankings(a, *it, method); });
    for (const auto& w : cmp.warnings) err << "warning: " << w << '\n';
    auto table = report::shift_table(a.uda_id, shift_report(a, *it));
    if (shifts.columns.empty()) shifts.columns = table.columns;
    shifts.rows.insert(shifts.rows.end(), table.rows.begin(), table.rows.end());
    comparisons.push_back(std::move(cmp));
  }
  if (comparisons.empty()) throw Failure{kInputError, "the two ranking files share no UDA"};

  prepare_out_dir(f.out);
  RunManifest manifest;
  manifest.command = "compare";
  manifest.config = {{"format", f.format}, {"correlation", f.correlation}};
  manifest.inputs = {f.a, f.b};
  const auto digest = manifest.digest();
  const fs::path dir(f.out);
  manifest.outputs.push_back(emit(dir, "correlation", report::correlation_table(comparisons), format, digest));
  manifest.outputs.push_back(emit(dir, "changes", report::change_table(comparisons), format, digest));
  manifest.outputs.push_back(emit(dir, "shifts", shifts, format, digest));
  manifest.write(dir / "manifest.json");

  for (const auto& c : comparisons)
    out << fmt::format("{}: {} out of {} ({}%) changed, max {}, mean {}, median {}, correlation {}\n", c.uda_id,
                       c.changed, c.n_universities, fx(c.pct_changed, 1), c.max_shift, fx(c.mean_shift, 1),
                       fx(c.median_shift, 1), fx(c.correlation, 3));
  return kOk;
}

struct TemporalFlags {
  std::string corpus;
  CommonFlags common;
  std::string early;
  std::string mature;
  int jcr_edition = 0;
  std::vector<std::string> sweep;
  int maturity_lag_months = 36;
  std::string correlation = "spearman";
};

int cmd_temporal(const TemporalFlags& f, std::ostream& out, std::ostream& err) {
  const auto format = report::parse_format(f.common.format);
  struct Parsed {
    YearRange period;
    TemporalOptions options;
    std::optional<Date> early;
    std::optional<Date> mature;
    std::vector<Date> sweep;
  };
  const auto p = computing([&] {
    Parsed p;
    p.period = YearRange::parse(f.common.period);
    p.options.min_staff = f.common.min_staff;
    p.options.maturity_lag_months = f.maturity_lag_months;
    p.options.productivity.national_average = parse_national_average(f.common.national);
    p.options.weighting = parse_weighting(f.common.weighting);
    p.options.correlation = parse_correlation(f.correlation);
    if (!f.early.empty()) p.early = Date::parse(f.early);
    if (!f.mature.empty()) p.mature = Date::parse(f.mature);
    for (const auto& s : f.sweep)
      for (const auto& d : csv::split_list(s, ',')) p.sweep.push_back(Date::parse(d));
    if (!p.early && p.sweep.empty()) throw InputError("temporal needs --early (benchmark analysis) or --sweep");
    if (p.mature && !p.early) throw InputError("--mature requires --early");
    return p;
  });
  const auto corpus = load(f.corpus);

  std::optional<BenchmarkReport> bench;
  std::optional<SweepReport> sweep;
  if (p.early)
    bench = computing([&] { return benchmark_analysis(corpus, p.period, *p.early, p.mature, f.jcr_edition, p.options); });
  if (!p.sweep.empty())
    sweep = computing([&] { return lag_sweep(corpus, p.period, p.sweep, f.jcr_edition, p.options); });

  prepare_out_dir(f.common.out);
  RunManifest manifest;
  manifest.command = "temporal";
  manifest.config = common_config(f.common);
  manifest.config["jcr_edition"] = fmt::format("{}", f.jcr_edition);
  manifest.config["maturity_lag_months"] = fmt::format("{}", f.maturity_lag_months);
  manifest.config["correlation"] = f.correlation;
  if (bench) {
    manifest.config["early"] = bench->early_date.iso();
    manifest.config["mature"] = bench->mature_date.iso();
  }
  if (sweep) {
    std::string dates;
    for (const auto& d : p.sweep) dates += (dates.empty() ? "" : ",") + d.iso();
    manifest.config["sweep"] = dates;
  }
  manifest.inputs = corpus_inputs(f.corpus);
  const auto digest = manifest.digest();
  const fs::path dir(f.common.out);

  if (bench) {
    manifest.outputs.push_back(emit(dir, "benchmark", report::benchmark_table(*bench), format, digest));
    for (const auto& n : bench->notices) err << "notice: " << n << '\n';
    out << fmt::format("benchmark: citations at {} vs {}, JCR {}\n", bench->early_date.iso(),
                       bench->mature_date.iso(), bench->jcr_edition);
    for (const auto& c : bench->comparisons)
      out << fmt::format("  {}: n={} citations corr {} mean {} | impact factor corr {} mean {}\n", c.uda_id,
                         c.citations_early.n_universities, fx(c.citations_early.correlation, 3),
                         fx(c.citations_early.mean_shift, 1), fx(c.impact_factor.correlation, 3),
                         fx(c.impact_factor.mean_shift, 1));
  }
  if (sweep) {
    manifest.outputs.push_back(emit(dir, "sweep", report::sweep_table(*sweep), format, digest));
    for (const auto& n : sweep->notices) err << "notice: " << n << '\n';
    for (const auto& r : sweep->rows)
      out << fmt::format("sweep {} {}: n={} corr {} changed {}%\n", r.date.iso(), r.stats.uda_id,
                         r.stats.n_universities, fx(r.stats.correlation, 3), fx(r.stats.pct_changed, 1));
  }
  manifest.write(dir / "manifest.json");
  return kOk;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const auto config = reading([&] { return synth::read_config(config_path); });
  const auto corpus = computing([&] { return synth::generate(config); });
  prepare_out_dir(out_dir);
  write_corpus(corpus, out_dir);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.config = {{"resolved", config.to_text()}, {"seed", fmt::format("{}", config.seed)}};
  manifest.inputs = {config_path};
  manifest.outputs = CorpusPaths::in_directory(out_dir).all();
  manifest.write(fs::path(out_dir) / "manifest.json");
  out << fmt::format("seed {}: {} publications, {} scientists, {} journals written to {}\n", config.seed,
                     corpus.publications().size(), corpus.scientists().size(), corpus.journals().size(), out_dir);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quality-weighted research productivity rankings under citation and impact-factor proxies",
               "proxyrank"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  std::string validate_dir;
  auto* validate = app.add_subcommand("validate", "Load a corpus directory and report every problem");
  validate->add_option("corpus", validate_dir, "Corpus directory")->required();

  RankFlags rank_flags;
  auto* rank = app.add_subcommand("rank", "Rank universities per UDA under one proxy");
  rank->add_option("corpus", rank_flags.corpus, "Corpus directory")->required();
  add_common(rank, rank_flags.common);
  rank->add_option("--proxy", rank_flags.proxy, "Quality proxy")
      ->check(CLI::IsMember({"citations", "impact-factor"}))
      ->capture_default_str();
  rank->add_option("--date", rank_flags.date, "Citation observation date (YYYY-MM-DD)");
  rank->add_option("--jcr-edition", rank_flags.jcr_edition, "JCR edition year for impact factors");
  rank->add_flag("--dump", rank_flags.dump, "Also write scores.csv and productivity.csv");

  CompareFlags compare_flags;
  auto* compare = app.add_subcommand("compare", "Compare two ranking files UDA by UDA");
  compare->add_option("ranking_a", compare_flags.a, "First ranking file")->required();
  compare->add_option("ranking_b", compare_flags.b, "Second ranking file")->required();
  compare->add_option("--out", compare_flags.out, "Output directory")->required();
  compare->add_option("--format", compare_flags.format)->check(CLI::IsMember({"tsv", "json"}))->capture_default_str();
  compare->add_option("--correlation", compare_flags.correlation)
      ->check(CLI::IsMember({"spearman", "pearson-values"}))
      ->capture_default_str();

  TemporalFlags temporal_flags;
  auto* temporal = app.add_subcommand("temporal", "Benchmark analysis and citation-lag sweep");
  temporal->add_option("corpus", temporal_flags.corpus, "Corpus directory")->required();
  add_common(temporal, temporal_flags.common);
  temporal->add_option("--early", temporal_flags.early, "Early citation observation date");
  temporal->add_option("--mature", temporal_flags.mature, "Benchmark citation date (default: latest snapshot)");
  temporal->add_option("--jcr-edition", temporal_flags.jcr_edition, "JCR edition year")->required();
  temporal->add_option("--sweep", temporal_flags.sweep, "Citation observation dates (comma separated)");
  temporal->add_option("--maturity-lag-months", temporal_flags.maturity_lag_months)->capture_default_str();
  temporal->add_option("--correlation", temporal_flags.correlation)
      ->check(CLI::IsMember({"spearman", "pearson-values"}))
      ->capture_default_str();

  std::string synth_config;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus from a config file");
  synth_cmd->add_option("config", synth_config, "Config file")->required();
  synth_cmd->add_option("--out-dir", synth_out, "Output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kSpecError;
  }

  try {
    if (*validate) return cmd_validate(validate_dir, out);
    if (*rank) return cmd_rank(rank_flags, out, err);
    if (*compare) return cmd_compare(compare_flags, out, err);
    if (*temporal) return cmd_temporal(temporal_flags, out, err);
    if (*synth_cmd) return cmd_synth(synth_config, synth_out, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kSpecError;
}

}  // namespace proxyrank::cli
