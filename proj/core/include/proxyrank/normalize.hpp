#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxyrank/corpus.hpp"

namespace proxyrank {

enum class Proxy { article_citations, journal_impact_factor };

// "citations" / "impact-factor" are the CLI spellings.
std::string_view to_string(Proxy proxy);
Proxy parse_proxy(std::string_view text);

// Whose distribution a journal's impact factor is ranked in.
//   journal:     every journal listing an IF for (edition, category) counts once
//   publication: every corpus publication in the category counts once, carrying its journal's IF
enum class JournalCohortWeighting { journal, publication };

std::string_view to_string(JournalCohortWeighting weighting);
JournalCohortWeighting parse_weighting(std::string_view text);

// The point of observation for one proxy.
struct Observation {
  Proxy proxy = Proxy::article_citations;
  Date date;            // citation proxy
  int jcr_edition = 0;  // impact-factor proxy
  JournalCohortWeighting weighting = JournalCohortWeighting::journal;

  static Observation citations(Date date) { return {Proxy::article_citations, date, 0, {}}; }
  static Observation impact_factor(int edition,
                                   JournalCohortWeighting w = JournalCohortWeighting::journal) {
    return {Proxy::journal_impact_factor, Date{}, edition, w};
  }

  std::string describe() const;
};

struct CohortKey {
  Id category_id;
  std::optional<int> year;  // set for citation cohorts only

  std::string to_string() const;
  auto operator<=>(const CohortKey&) const = default;
};

struct Cohort {
  CohortKey key;
  std::vector<Id> members;     // publication ids, or journal ids for journal-weighted IF cohorts
  std::vector<double> values;  // raw metric, parallel to members
};

struct Skipped {
  Id publication_id;
  std::string reason;
};

struct CohortSet {
  std::vector<Cohort> cohorts;  // ascending by key
  std::vector<Skipped> skipped;
};

// A publication's percentile index under one proxy.
struct QualityScore {
  Id publication_id;
  Proxy proxy = Proxy::article_citations;
  double value = 0.0;  // [0, 100)
  std::vector<CohortKey> cohorts;
  Observation observation;

  std::string cohort_key() const;
};

// Share (in percent) of cohort members strictly below `value`. Ties share the low percentile.
// Throws InputError if the cohort is empty or does not contain `value`.
double percentile_rank(double value, std::span<const double> cohort_values);

CohortSet build_cohorts(const Corpus& corpus, const Observation& observation);

// Single-publication scoring. Multi-category publications get the mean of their
// per-category percentiles. Throws CoverageError when the data is missing.
QualityScore qi_article(const Corpus& corpus, const Id& publication_id, Date observation_date);
QualityScore qi_journal(const Corpus& corpus, const Id& publication_id, int jcr_edition,
                        JournalCohortWeighting weighting = JournalCohortWeighting::journal);

class ScoreTable {
 public:
  ScoreTable() = default;
  ScoreTable(Observation observation, std::map<Id, QualityScore> scores, std::vector<Skipped> skipped)
      : observation_(observation), scores_(std::move(scores)), skipped_(std::move(skipped)) {}

  const Observation& observation() const noexcept { return observation_; }
  const std::map<Id, QualityScore>& scores() const noexcept { return scores_; }
  const std::vector<Skipped>& skipped() const noexcept { return skipped_; }
  const QualityScore* find(const Id& publication_id) const;

 private:
  Observation observation_;
  std::map<Id, QualityScore> scores_;
  std::vector<Skipped> skipped_;
};

// Scores every scorable publication of the corpus in one pass over the cohorts.
ScoreTable score_corpus(const Corpus& corpus, const Observation& observation);

// CSV: publication_id,proxy,cohort_key,value (4 decimals).
void write_score_dump(const ScoreTable& table, std::ostream& out);

}  // namespace proxyrank
