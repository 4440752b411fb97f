#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxyrank/corpus.hpp"
#include "proxyrank/normalize.hpp"
#include "proxyrank/productivity.hpp"
#include "proxyrank/ranking.hpp"

namespace proxyrank {

// One evaluation exercise: which publications, which proxy, observed when.
struct ExerciseSpec {
  YearRange period;
  Observation observation;
  double min_staff = kDefaultMinStaff;
  ProductivityOptions productivity;

  // Throws InputError if inconsistent (e.g. citations observed before the period closes).
  void validate() const;
};

struct ExerciseResult {
  ExerciseSpec spec;
  ProductivityReport productivity;
  std::vector<Ranking> rankings;  // one per UDA, ascending UDA id
  std::vector<std::string> notices;

  const Ranking* ranking(const Id& uda_id) const;
};

// normalize -> productivity -> rank. Throws CoverageError when snapshots or IFs are missing.
ExerciseResult run_exercise(const Corpus& corpus, const ExerciseSpec& spec);

struct TemporalOptions {
  double min_staff = kDefaultMinStaff;
  int maturity_lag_months = 36;
  ProductivityOptions productivity;
  JournalCohortWeighting weighting = JournalCohortWeighting::journal;
  CorrelationMethod correlation = CorrelationMethod::spearman;
};

struct BenchmarkComparison {
  Id uda_id;
  std::string uda_name;
  RankingComparison citations_early;  // early citations vs benchmark
  RankingComparison impact_factor;    // impact factor vs benchmark
};

struct BenchmarkReport {
  Date early_date;
  Date mature_date;
  int jcr_edition = 0;
  std::vector<BenchmarkComparison> comparisons;  // ascending UDA id
  std::vector<std::string> notices;
};

// The benchmark is the citation ranking at `mature_date`; when omitted, the latest snapshot
// date in the corpus, which must lie at least the maturity lag after the period closes.
// Both arms are compared over the universities ranked in all three exercises.
BenchmarkReport benchmark_analysis(const Corpus& corpus, YearRange period, Date early_date,
                                   std::optional<Date> mature_date, int jcr_edition,
                                   const TemporalOptions& options = {});

struct SweepRow {
  Date date;
  RankingComparison stats;  // citations at `date` vs impact factor
};

struct SweepReport {
  int jcr_edition = 0;
  std::vector<SweepRow> rows;  // ascending date, then UDA id
  std::vector<std::string> notices;
};

SweepReport lag_sweep(const Corpus& corpus, YearRange period, std::vector<Date> observation_dates,
                      int jcr_edition, const TemporalOptions& options = {});

}  // namespace proxyrank
