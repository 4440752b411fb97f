#include "proxyrank/temporal.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace proxyrank {

void ExerciseSpec::validate() const {
  if (period.empty()) throw InputError("empty period");
  if (min_staff < 0.0) throw InputError("min_staff must be >= 0");
  if (observation.proxy == Proxy::article_citations && observation.date < period.end_date())
    throw InputError(fmt::format("citations observed on {} before the period {} closes",
                                 observation.date.iso(), period.to_string()));
}

const Ranking* ExerciseResult::ranking(const Id& uda_id) const {
  for (const auto& r : rankings)
    if (r.uda_id == uda_id) return &r;
  return nullptr;
}

ExerciseResult run_exercise(const Corpus& corpus, const ExerciseSpec& spec) {
  spec.validate();
  ExerciseResult out;
  out.spec = spec;

  const auto scores = score_corpus(corpus, spec.observation);
  out.productivity = compute_productivity(corpus, scores, spec.period, spec.productivity);
  out.notices = out.productivity.warnings;

  const auto in_period = std::count_if(corpus.publications().begin(), corpus.publications().end(),
                                       [&](const auto& kv) { return spec.period.contains(kv.second.year); });
  if (in_period == 0) out.notices.push_back(fmt::format("no publications in period {}", spec.period.to_string()));

  for (const auto& [uda_id, uda] : corpus.structure().udas) {
    std::vector<RankCandidate> candidates;
    auto it = out.productivity.uda.find(uda_id);
    if (it != out.productivity.uda.end()) {
      for (const auto& c : it->second) {
        RankCandidate rc{c.university_id, corpus.university(c.university_id).name, c.staff, std::nullopt, c.reason};
        if (c.productivity) rc.value = c.productivity->value;
        candidates.push_back(std::move(rc));
      }
    }
    auto ranking = build_ranking(uda_id, spec.observation.proxy, candidates, spec.min_staff);
    ranking.uda_name = uda.name;
    if (ranking.entries.empty())
      out.notices.push_back(fmt::format("UDA '{}': no university qualifies for ranking", uda_id));
    out.rankings.push_back(std::move(ranking));
  }
  return out;
}

namespace {

std::set<Id> ranked_ids(const Ranking* r) {
  std::set<Id> out;
  if (r)
    for (const auto& e : r->entries) out.insert(e.university_id);
  return out;
}

std::set<Id> intersect(const std::set<Id>& a, const std::set<Id>& b) {
  std::set<Id> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

constexpr const char* kNotInAllArms = "not ranked in every arm of the comparison";

}  // namespace

BenchmarkReport benchmark_analysis(const Corpus& corpus, YearRange period, Date early_date,
                                   std::optional<Date> mature_date, int jcr_edition,
                                   const TemporalOptions& options) {
  BenchmarkReport report;
  report.early_date = early_date;
  report.jcr_edition = jcr_edition;

  if (mature_date) {
    report.mature_date = *mature_date;
  } else {
    const auto dates = corpus.snapshot_dates();
    const Date required = period.end_date().plus_months(options.maturity_lag_months);
    if (dates.empty() || *dates.rbegin() < required)
      throw CoverageError(fmt::format("no snapshot at least {} months after {} to serve as benchmark (need {})",
                                      options.maturity_lag_months, period.end_date().iso(), required.iso()));
    report.mature_date = *dates.rbegin();
  }
  if (report.mature_date < early_date)
    throw InputError(fmt::format("mature date {} precedes early date {}", report.mature_date.iso(), early_date.iso()));
  if (report.mature_date < period.end_date().plus_months(options.maturity_lag_months))
    report.notices.push_back(fmt::format("benchmark date {} is less than {} months after the period closes",
                                         report.mature_date.iso(), options.maturity_lag_months));

  auto spec = [&](Observation obs) { return ExerciseSpec{period, obs, options.min_staff, options.productivity}; };
  const auto bench = run_exercise(corpus, spec(Observation::citations(report.mature_date)));
  const auto early = run_exercise(corpus, spec(Observation::citations(early_date)));
  const auto impact = run_exercise(corpus, spec(Observation::impact_factor(jcr_edition, options.weighting)));

  for (const auto& b : bench.rankings) {
    const auto* e = early.ranking(b.uda_id);
    const auto* i = impact.ranking(b.uda_id);
    const auto common = intersect(intersect(ranked_ids(&b), ranked_ids(e)), ranked_ids(i));
    if (common.size() < 2) {
      report.notices.push_back(fmt::format("UDA '{}': fewer than 2 universities ranked in every arm; skipped", b.uda_id));
      continue;
    }
    const auto rb = restrict_to(b, common, kNotInAllArms);
    BenchmarkComparison cmp{b.uda_id, b.uda_name,
                            compare_rankings(restrict_to(*e, common, kNotInAllArms), rb, options.correlation),
                            compare_rankings(restrict_to(*i, common, kNotInAllArms), rb, options.correlation)};
    report.comparisons.push_back(std::move(cmp));
  }
  return report;
}

SweepReport lag_sweep(const Corpus& corpus, YearRange period, std::vector<Date> observation_dates, int jcr_edition,
                      const TemporalOptions& options) {
  if (observation_dates.empty()) throw InputError("lag sweep needs at least one observation date");
  std::sort(observation_dates.begin(), observation_dates.end());
  observation_dates.erase(std::unique(observation_dates.begin(), observation_dates.end()), observation_dates.end());

  SweepReport report;
  report.jcr_edition = jcr_edition;
  const auto impact = run_exercise(
      corpus, ExerciseSpec{period, Observation::impact_factor(jcr_edition, options.weighting), options.min_staff,
                           options.productivity});

  for (const auto& date : observation_dates) {
    const auto cit = run_exercise(
        corpus, ExerciseSpec{period, Observation::citations(date), options.min_staff, options.productivity});
    for (const auto& r : cit.rankings) {
      const auto* i = impact.ranking(r.uda_id);
      const auto common = intersect(ranked_ids(&r), ranked_ids(i));
      if (common.size() < 2) {
        report.notices.push_back(
            fmt::format("{} UDA '{}': fewer than 2 universities ranked under both proxies; skipped", date.iso(), r.uda_id));
        continue;
      }
      report.rows.push_back({date, compare_rankings(restrict_to(r, common, kNotInAllArms),
                                                    restrict_to(*i, common, kNotInAllArms), options.correlation)});
    }
  }
  return report;
}

}  // namespace proxyrank
