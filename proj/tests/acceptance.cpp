// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cli/commands.hpp"
#include "proxyrank/productivity.hpp"
#include "proxyrank/report.hpp"
#include "proxyrank/rng.hpp"
#include "proxyrank/synth.hpp"
#include "proxyrank/temporal.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace proxyrank;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && seconds > budget_seconds) {
    o.pass = false;
    o.detail += fmt::format("; over the {:.0f} s budget", budget_seconds);
  }
  if (!o.pass) ++failures;
  std::cout << fmt::format("{} [{}] {}: {} ({:.2f} s)", o.pass ? "PASS" : "FAIL", number, title, o.detail, seconds)
            << std::endl;
}

RankingComparison biology_comparison() {
  const auto a = report::read_rankings(testing::data_dir() / "biology_pa.tsv").at(0);
  const auto b = report::read_rankings(testing::data_dir() / "biology_pj.tsv").at(0);
  return compare_rankings(a, b);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + 1e-300; }

Outcome golden_changes() {
  const auto c = biology_comparison();
  const auto pct = report::format_fixed(c.pct_changed, 1);
  const bool pass = c.changed == 39 && c.n_universities == 52 && pct == "75.0" && c.max_shift == 13 &&
                    std::abs(c.mean_shift - 2.6) <= 0.05 && c.median_shift == 1.5;
  return {pass, fmt::format("{} of {} changed ({}%), max {}, mean {}, median {}", c.changed, c.n_universities, pct,
                            c.max_shift, report::format_fixed(c.mean_shift, 1), report::format_fixed(c.median_shift, 1))};
}

Outcome golden_correlation() {
  const auto c = biology_comparison();
  return {std::abs(c.correlation - 0.963) <= 0.003, fmt::format("Spearman {:.5f}, expected 0.963 +/- 0.003", c.correlation)};
}

Outcome percentile_oracle() {
  RandomStream rng(31337);
  std::size_t values = 0, mismatches = 0;
  for (int cohort = 0; cohort < 1000; ++cohort) {
    const auto n = 1 + rng.below(12);
    const auto range = 1 + rng.below(10);  // small ranges force ties
    std::vector<double> members;
    for (std::size_t i = 0; i < n; ++i)
      members.push_back(rng.bernoulli(0.5) ? static_cast<double>(rng.below(range)) : rng.uniform() * 5.0);
    const auto expected = oracle::percentiles(members);
    for (std::size_t i = 0; i < n; ++i, ++values)
      if (percentile_rank(members[i], members) != expected[i]) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} values in 1000 cohorts, {} mismatches", values, mismatches)};
}

Outcome pipeline_oracle() {
  int corpora = 0, compared = 0, failures_here = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; corpora < 60 && seed < 1000; ++seed) {
    const auto config = testing::micro_config(seed);
    const auto corpus = synth::generate(config);
    if (corpus.publications().empty() || corpus.publications().size() > 20) continue;
    testing::TempDir tmp;
    write_corpus(corpus, tmp.path());
    const auto loaded = load_corpus(tmp.path());
    ++corpora;
    for (bool citations : {true, false}) {
      const auto observation = citations ? Observation::citations(Date(2008, 3, 31))
                                         : Observation::impact_factor(config.period.last);
      const auto report = compute_productivity(loaded, score_corpus(loaded, observation), config.period);
      const auto expected = oracle::recompute(
          tmp.path(), oracle::Query{config.period.first, config.period.last, citations, "2008-03-31", config.period.last});
      std::size_t got = 0;
      for (const auto& [uda, candidates] : report.uda)
        for (const auto& c : candidates) {
          if (!c.productivity) continue;
          ++got;
          auto it = expected.uda_productivity.find({c.university_id, uda});
          if (it == expected.uda_productivity.end()) {
            ++failures_here;
            continue;
          }
          ++compared;
          const double rel = std::abs(c.productivity->value - it->second) / std::max(1e-300, std::abs(it->second));
          worst = std::max(worst, it->second == 0.0 ? std::abs(c.productivity->value) : rel);
          if (!close(c.productivity->value, it->second, 1e-9)) ++failures_here;
        }
      if (got != expected.uda_productivity.size()) ++failures_here;
    }
  }
  return {corpora >= 50 && failures_here == 0 && compared > 0,
          fmt::format("{} corpora, {} UDA productivities compared, {} mismatches, worst relative error {:.2e}", corpora,
                      compared, failures_here, worst)};
}

Outcome invariants() {
  int violations = 0;
  std::size_t scores = 0, sds = 0, udas = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomStream shape(seed);
    auto config = testing::lag_config(seed);
    config.universities = 5 + static_cast<int>(shape.below(20));
    config.scientists_per_sds = 2.0 + 4.0 * shape.uniform();
    config.period = YearRange{2004, 2004 + static_cast<int>(shape.below(3))};
    config.snapshot_dates = {Date(2008, 3, 31)};
    config.jcr_editions = {2006};
    config.turnover = 0.2;
    const auto corpus = synth::generate(config);
    for (const auto& observation : {Observation::citations(Date(2008, 3, 31)), Observation::impact_factor(2006)}) {
      const auto table = score_corpus(corpus, observation);
      for (const auto& [id, s] : table.scores()) {
        ++scores;
        if (!(s.value >= 0.0 && s.value < 100.0)) ++violations;
      }
      const auto report = compute_productivity(corpus, table, config.period);
      std::map<Id, std::pair<double, double>> weighted;
      for (const auto& [key, p] : report.sds) {
        if (p.excluded() || !report.national.at(key.second).normalizable()) continue;
        weighted[key.second].first += *p.value / report.national.at(key.second).value * p.staff;
        weighted[key.second].second += p.staff;
      }
      for (const auto& [id, w] : weighted) {
        ++sds;
        if (std::abs(w.first / w.second - 1.0) > 1e-9) ++violations;
      }
      for (const auto& [uda, candidates] : report.uda)
        for (const auto& c : candidates) {
          if (!c.productivity) continue;
          ++udas;
          double lo = INFINITY, hi = -INFINITY;
          for (const auto& t : c.productivity->terms) lo = std::min(lo, t.ratio), hi = std::max(hi, t.ratio);
          if (c.productivity->value < lo * (1 - 1e-12) - 1e-15 || c.productivity->value > hi * (1 + 1e-12) + 1e-15)
            ++violations;
        }
    }
  }
  return {violations == 0, fmt::format("100 corpora x 2 proxies: {} scores, {} SDS means, {} UDA bounds, {} violations",
                                       scores, sds, udas, violations)};
}

Outcome lag_effect() {
  const int seeds = 25;
  int window = 0, slower = 0;
  double mean_fast = 0.0, mean_slow = 0.0;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto config = testing::lag_config(static_cast<std::uint64_t>(seed));
    const auto corpus = synth::generate(config);
    // 3-month and 39-month windows after the end of the publication year
    const auto sweep = lag_sweep(corpus, config.period, {Date(2005, 3, 31), Date(2008, 3, 31)}, 2004);
    std::map<std::pair<Date, Id>, double> corr;
    for (const auto& row : sweep.rows) corr[{row.date, row.stats.uda_id}] = row.stats.correlation;
    const double fast = corr.at({Date(2008, 3, 31), "BIO"}) - corr.at({Date(2005, 3, 31), "BIO"});
    const double slow = corr.at({Date(2008, 3, 31), "MAT"}) - corr.at({Date(2005, 3, 31), "MAT"});
    if (fast > 0.0 && slow > 0.0) ++window;
    if (slow > fast) ++slower;
    mean_fast += fast / seeds;
    mean_slow += slow / seeds;
  }
  return {window >= 0.8 * seeds && slower >= 0.7 * seeds,
          fmt::format("long window wins in {}/{} seeds (both areas), larger gap for the 3-year peak in {}/{}; "
                      "mean gap 2y {:.3f}, 3y {:.3f}",
                      window, seeds, slower, seeds, mean_fast, mean_slow)};
}

Outcome benchmark_self() {
  std::vector<std::pair<Corpus, YearRange>> corpora;
  corpora.emplace_back(load_corpus(testing::data_dir() / "bio"), YearRange{2004, 2004});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto config = testing::lag_config(seed);
    config.universities = 20;
    corpora.emplace_back(synth::generate(config), config.period);
  }
  const auto start = std::chrono::steady_clock::now();
  int checked = 0, bad = 0;
  for (const auto& [corpus, period] : corpora)
    for (const auto& date : corpus.snapshot_dates()) {
      if (date < period.end_date()) continue;
      const auto edition = corpus.journals().begin()->second.impact_factors.begin()->first.jcr_edition;
      const auto r = benchmark_analysis(corpus, period, date, date, edition);
      for (const auto& c : r.comparisons) {
        ++checked;
        const auto& s = c.citations_early;
        if (s.correlation != 1.0 || s.changed != 0 || s.max_shift != 0 || s.mean_shift != 0.0 || s.median_shift != 0.0)
          ++bad;
      }
    }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {bad == 0 && checked > 0 && seconds < 1.0,
          fmt::format("{} UDA self-comparisons, {} imperfect; analysis time {:.3f} s", checked, bad, seconds)};
}

Outcome determinism() {
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  testing::TempDir tmp;
  testing::spit(tmp / "synth.ini",
                "seed = 20240607\nuniversities = 30\nperiod = 2004-2006\n"
                "snapshot_dates = 2006-01-01, 2007-03-31, 2008-03-31, 2010-03-31\njcr_editions = 2004, 2006\n"
                "[uda.BIO]\nname = Biology\npeak_lag_years = 2\n[uda.MAT]\nname = Mathematics\npeak_lag_years = 3\n");
  // Both runs use the same paths, so manifests (which record input paths) must match too.
  const auto root = tmp / "run";
  auto pipeline = [&] {
    fs::remove_all(root);
    const auto corpus = (root / "corpus").string();
    std::ostringstream sink;
    auto run = [&](std::vector<std::string> args) {
      if (cli::run(args, sink, sink) != 0) throw std::runtime_error("command failed: " + args.front() + "\n" + sink.str());
    };
    run({"synth", (tmp / "synth.ini").string(), "--out-dir", corpus});
    run({"rank", corpus, "--period", "2004-2006", "--date", "2008-03-31", "--out", (root / "pa").string(), "--dump"});
    run({"rank", corpus, "--period", "2004-2006", "--proxy", "impact-factor", "--jcr-edition", "2006", "--out",
         (root / "pj").string(), "--format", "json"});
    run({"compare", (root / "pa" / "ranking.tsv").string(), (root / "pj" / "ranking.json").string(), "--out",
         (root / "cmp").string()});
    run({"temporal", corpus, "--period", "2004", "--early", "2006-01-01", "--mature", "2008-03-31", "--jcr-edition",
         "2004", "--sweep", "2010-03-31,2006-01-01,2007-03-31", "--out", (root / "tmp").string()});
    return testing::snapshot_tree(root);
  };
  const auto a = pipeline();
  const auto b = pipeline();
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a)
    if (!b.contains(name) || b.at(name) != bytes) ++differing;
  ::unsetenv("SOURCE_DATE_EPOCH");
  return {differing == 0 && a.size() == b.size() && !a.empty(),
          fmt::format("{} files per run, {} differ", a.size(), differing)};
}

}  // namespace

int main() {
  criterion(1, "Biology rank pairs: change statistics", 1.0, golden_changes);
  criterion(2, "Biology rank pairs: Spearman correlation", 1.0, golden_correlation);
  criterion(3, "percentile rank vs pairwise counting oracle", 5.0, percentile_oracle);
  criterion(4, "UDA productivity vs brute-force recomputation", 0.0, pipeline_oracle);
  criterion(5, "normalization invariants", 0.0, invariants);
  criterion(6, "citation window and life-cycle lag effect", 120.0, lag_effect);
  criterion(7, "benchmark self-comparison", 0.0, benchmark_self);
  criterion(8, "byte-identical synth and pipeline outputs", 0.0, determinism);
  std::cout << (failures == 0 ? "all criteria passed" : fmt::format("{} criteria failed", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
