#include "proxyrank/normalize.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "proxyrank/csv.hpp"

namespace proxyrank {

std::string_view to_string(Proxy proxy) {
  return proxy == Proxy::article_citations ? "citations" : "impact-factor";
}

Proxy parse_proxy(std::string_view text) {
  if (text == "citations" || text == "article_citations") return Proxy::article_citations;
  if (text == "impact-factor" || text == "journal_impact_factor") return Proxy::journal_impact_factor;
  throw InputError(fmt::format("unknown proxy '{}' (expected citations or impact-factor)", text));
}

std::string_view to_string(JournalCohortWeighting weighting) {
  return weighting == JournalCohortWeighting::journal ? "journal" : "publication";
}

JournalCohortWeighting parse_weighting(std::string_view text) {
  if (text == "journal") return JournalCohortWeighting::journal;
  if (text == "publication") return JournalCohortWeighting::publication;
  throw InputError(fmt::format("unknown cohort weighting '{}' (expected journal or publication)", text));
}

std::string Observation::describe() const {
  if (proxy == Proxy::article_citations) return "citations@" + date.iso();
  return fmt::format("impact-factor@JCR{}/{}", jcr_edition, to_string(weighting));
}

std::string CohortKey::to_string() const {
  return year ? fmt::format("{}@{}", category_id, *year) : category_id;
}

std::string QualityScore::cohort_key() const {
  std::string out;
  for (std::size_t i = 0; i < cohorts.size(); ++i) {
    if (i > 0) out += ';';
    out += cohorts[i].to_string();
  }
  return out;
}

double percentile_rank(double value, std::span<const double> cohort_values) {
  if (cohort_values.empty()) throw InputError("percentile of an empty cohort");
  std::size_t below = 0;
  bool member = false;
  for (double v : cohort_values) {
    if (v < value) ++below;
    if (v == value) member = true;
  }
  if (!member) throw InputError(fmt::format("value {} is not a member of its cohort", value));
  return 100.0 * static_cast<double>(below) / static_cast<double>(cohort_values.size());
}

namespace {

// Percentile against a sorted cohort: strictly-below count is the lower bound.
double sorted_percentile(double value, const std::vector<double>& sorted) {
  const auto below = std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin();
  return 100.0 * static_cast<double>(below) / static_cast<double>(sorted.size());
}

// Impact factor of the publication's journal in every category, or the first missing category.
struct JournalValues {
  std::vector<double> values;
  std::optional<Id> missing;
};

JournalValues journal_values(const Corpus& corpus, const Publication& pub, int edition) {
  JournalValues out;
  const auto& journal = corpus.journal(pub.journal_id);
  for (const auto& cat : pub.category_ids) {
    auto v = journal.impact_factor(edition, cat);
    if (!v) {
      out.missing = cat;
      return out;
    }
    out.values.push_back(*v);
  }
  return out;
}

std::string missing_if_message(const Publication& pub, int edition, const Id& category) {
  return fmt::format("journal '{}' of publication '{}' has no JCR {} impact factor for category '{}'",
                     pub.journal_id, pub.id, edition, category);
}

std::string missing_snapshot_message(const Publication& pub, Date date) {
  return fmt::format("publication '{}' has no citation snapshot at or before {}", pub.id, date.iso());
}

}  // namespace

CohortSet build_cohorts(const Corpus& corpus, const Observation& observation) {
  std::map<CohortKey, Cohort> cohorts;
  CohortSet out;
  auto add = [&](CohortKey key, const Id& member, double value) {
    auto& c = cohorts[key];
    c.key = std::move(key);
    c.members.push_back(member);
    c.values.push_back(value);
  };

  if (observation.proxy == Proxy::article_citations) {
    for (const auto& [id, pub] : corpus.publications()) {
      auto count = pub.citations_at(observation.date);
      if (!count) {
        out.skipped.push_back({id, missing_snapshot_message(pub, observation.date)});
        continue;
      }
      for (const auto& cat : pub.category_ids) add({cat, pub.year}, id, static_cast<double>(*count));
    }
  } else if (observation.weighting == JournalCohortWeighting::journal) {
    for (const auto& [id, journal] : corpus.journals())
      for (const auto& [key, value] : journal.impact_factors)
        if (key.jcr_edition == observation.jcr_edition) add({key.category_id, std::nullopt}, id, value);
    for (const auto& [id, pub] : corpus.publications()) {
      auto jv = journal_values(corpus, pub, observation.jcr_edition);
      if (jv.missing) out.skipped.push_back({id, missing_if_message(pub, observation.jcr_edition, *jv.missing)});
    }
  } else {
    for (const auto& [id, pub] : corpus.publications()) {
      auto jv = journal_values(corpus, pub, observation.jcr_edition);
      if (jv.missing) {
        out.skipped.push_back({id, missing_if_message(pub, observation.jcr_edition, *jv.missing)});
        continue;
      }
      for (std::size_t i = 0; i < pub.category_ids.size(); ++i)
        add({pub.category_ids[i], std::nullopt}, id, jv.values[i]);
    }
  }

  for (auto& [key, cohort] : cohorts) out.cohorts.push_back(std::move(cohort));
  return out;
}

ScoreTable score_corpus(const Corpus& corpus, const Observation& observation) {
  auto set = build_cohorts(corpus, observation);
  std::map<CohortKey, std::vector<double>> sorted;
  for (const auto& c : set.cohorts) {
    auto v = c.values;
    std::sort(v.begin(), v.end());
    sorted.emplace(c.key, std::move(v));
  }

  std::map<Id, QualityScore> scores;
  const bool by_citations = observation.proxy == Proxy::article_citations;
  for (const auto& [id, pub] : corpus.publications()) {
    double metric_single = 0.0;
    std::vector<double> metrics;
    if (by_citations) {
      auto count = pub.citations_at(observation.date);
      if (!count) continue;
      metric_single = static_cast<double>(*count);
    } else {
      auto jv = journal_values(corpus, pub, observation.jcr_edition);
      if (jv.missing) continue;
      metrics = std::move(jv.values);
    }
    QualityScore score{id, observation.proxy, 0.0, {}, observation};
    double sum = 0.0;
    for (std::size_t i = 0; i < pub.category_ids.size(); ++i) {
      CohortKey key{pub.category_ids[i], by_citations ? std::optional<int>(pub.year) : std::nullopt};
      sum += sorted_percentile(by_citations ? metric_single : metrics[i], sorted.at(key));
      score.cohorts.push_back(std::move(key));
    }
    score.value = sum / static_cast<double>(pub.category_ids.size());
    scores.emplace(id, std::move(score));
  }
  return ScoreTable(observation, std::move(scores), std::move(set.skipped));
}

QualityScore qi_article(const Corpus& corpus, const Id& publication_id, Date observation_date) {
  const auto& pub = corpus.publication(publication_id);
  const auto own = pub.citations_at(observation_date);
  if (!own) throw CoverageError(missing_snapshot_message(pub, observation_date));

  QualityScore score{pub.id, Proxy::article_citations, 0.0, {}, Observation::citations(observation_date)};
  double sum = 0.0;
  for (const auto& cat : pub.category_ids) {
    std::vector<double> cohort;
    for (const auto& [id, other] : corpus.publications()) {
      if (other.year != pub.year) continue;
      if (std::find(other.category_ids.begin(), other.category_ids.end(), cat) == other.category_ids.end())
        continue;
      if (auto c = other.citations_at(observation_date)) cohort.push_back(static_cast<double>(*c));
    }
    sum += percentile_rank(static_cast<double>(*own), cohort);
    score.cohorts.push_back({cat, pub.year});
  }
  score.value = sum / static_cast<double>(pub.category_ids.size());
  return score;
}

QualityScore qi_journal(const Corpus& corpus, const Id& publication_id, int jcr_edition,
                        JournalCohortWeighting weighting) {
  const auto& pub = corpus.publication(publication_id);
  auto own = journal_values(corpus, pub, jcr_edition);
  if (own.missing) throw CoverageError(missing_if_message(pub, jcr_edition, *own.missing));

  QualityScore score{pub.id, Proxy::journal_impact_factor, 0.0, {},
                     Observation::impact_factor(jcr_edition, weighting)};
  double sum = 0.0;
  for (std::size_t i = 0; i < pub.category_ids.size(); ++i) {
    const auto& cat = pub.category_ids[i];
    std::vector<double> cohort;
    if (weighting == JournalCohortWeighting::journal) {
      for (const auto& [id, journal] : corpus.journals())
        if (auto v = journal.impact_factor(jcr_edition, cat)) cohort.push_back(*v);
    } else {
      for (const auto& [id, other] : corpus.publications()) {
        if (std::find(other.category_ids.begin(), other.category_ids.end(), cat) == other.category_ids.end())
          continue;
        auto jv = journal_values(corpus, other, jcr_edition);
        if (jv.missing) continue;
        const auto pos = std::find(other.category_ids.begin(), other.category_ids.end(), cat) -
                         other.category_ids.begin();
        cohort.push_back(jv.values[static_cast<std::size_t>(pos)]);
      }
    }
    sum += percentile_rank(own.values[i], cohort);
    score.cohorts.push_back({cat, std::nullopt});
  }
  score.value = sum / static_cast<double>(pub.category_ids.size());
  return score;
}

const QualityScore* ScoreTable::find(const Id& publication_id) const {
  auto it = scores_.find(publication_id);
  return it == scores_.end() ? nullptr : &it->second;
}

void write_score_dump(const ScoreTable& table, std::ostream& out) {
  out << "publication_id,proxy,cohort_key,value\n";
  for (const auto& [id, s] : table.scores())
    out << csv::join_row({id, std::string(to_string(s.proxy)), s.cohort_key(), fmt::format("{:.4f}", s.value)})
        << '\n';
}

}  // namespace proxyrank
