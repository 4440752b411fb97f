#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "proxyrank/normalize.hpp"
#include "proxyrank/rng.hpp"
#include "proxyrank/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace proxyrank;
using proxyrank::testing::MiniCorpus;

namespace {

double pct(double value, std::vector<double> cohort) { return percentile_rank(value, cohort); }

// One category, one year; publication i has citations[i] at 2008-03-31.
Corpus citation_cohort(const std::vector<std::int64_t>& citations) {
  MiniCorpus m;
  m.university("U1").sds("S1", "A").scientist("R1", "U1", "S1", 2004, 2004);
  for (std::size_t i = 0; i < citations.size(); ++i)
    m.publication("P" + std::to_string(100 + i), 2004, "J1", {"C1"}, {"R1"}, {{Date(2008, 3, 31), citations[i]}});
  return m.build();
}

}  // namespace

TEST_SUITE("normalize") {
  TEST_CASE("percentile counts members strictly below") {
    CHECK(pct(5, {5}) == 0.0);
    CHECK(pct(10, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) == 90.0);
    CHECK(pct(2, {0, 0, 0, 1, 2, 2, 3, 4, 5, 7}) == 40.0);
    CHECK(pct(0, {0, 0, 0, 1, 2, 2, 3, 4, 5, 7}) == 0.0);
    CHECK(pct(3, {3, 3, 3}) == 0.0);
  }

  TEST_CASE("percentile preconditions") {
    CHECK_THROWS_AS(pct(1, {}), InputError);
    CHECK_THROWS_AS(pct(1, {0, 2}), InputError);
  }

  TEST_CASE("percentile properties over random cohorts") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
      const auto n = 1 + rng.below(15);
      std::vector<double> cohort;
      for (std::size_t i = 0; i < n; ++i) cohort.push_back(static_cast<double>(rng.below(6)));
      const auto expected = oracle::percentiles(cohort);
      std::vector<double> transformed;
      for (double v : cohort) transformed.push_back(std::exp(v) * 3.0 + 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = percentile_rank(cohort[i], cohort);
        CHECK(p == expected[i]);
        CHECK(p >= 0.0);
        CHECK(p < 100.0);
        CHECK(percentile_rank(transformed[i], transformed) == p);
        for (std::size_t j = 0; j < n; ++j)
          if (cohort[i] > cohort[j]) CHECK(p > percentile_rank(cohort[j], cohort));
      }
    }
  }

  TEST_CASE("article index against the citation cohort") {
    const auto corpus = citation_cohort({0, 1, 1, 2, 3, 5});
    CHECK(qi_article(corpus, "P100", Date(2008, 3, 31)).value == 0.0);
    CHECK(qi_article(corpus, "P105", Date(2008, 3, 31)).value == doctest::Approx(500.0 / 6.0));
    CHECK(qi_article(corpus, "P101", Date(2008, 3, 31)).value == doctest::Approx(100.0 / 6.0));

    std::vector<std::int64_t> distinct(20);
    for (int i = 0; i < 20; ++i) distinct[i] = i * 2;
    CHECK(qi_article(citation_cohort(distinct), "P119", Date(2008, 3, 31)).value == doctest::Approx(95.0));
  }

  TEST_CASE("article index carries snapshots forward and needs one") {
    const auto corpus = citation_cohort({1, 2});
    CHECK(qi_article(corpus, "P101", Date(2012, 1, 1)).value == 50.0);
    CHECK_THROWS_AS(qi_article(corpus, "P101", Date(2008, 3, 30)), CoverageError);
    CHECK_THROWS_AS(qi_article(corpus, "P404", Date(2008, 3, 31)), InputError);
  }

  TEST_CASE("multi-category publications average their category percentiles") {
    // P0 sits at 40 in C1 (4 of 10 below) and 60 in C2 (6 of 10 below).
    MiniCorpus m;
    m.university("U1").sds("S1", "A").scientist("R1", "U1", "S1", 2004, 2004);
    const Date d(2008, 3, 31);
    m.publication("P0", 2004, "J1", {"C1", "C2"}, {"R1"}, {{d, 10}});
    for (int i = 0; i < 9; ++i) {
      m.publication("A" + std::to_string(i), 2004, "J1", {"C1"}, {"R1"}, {{d, i < 4 ? 1 : 20}});
      m.publication("B" + std::to_string(i), 2004, "J1", {"C2"}, {"R1"}, {{d, i < 6 ? 1 : 20}});
    }
    const auto corpus = m.build();
    const auto q = qi_article(corpus, "P0", d);
    CHECK(q.value == doctest::Approx(50.0));
    CHECK(q.cohorts.size() == 2);
    CHECK(q.cohort_key() == "C1@2004;C2@2004");
  }

  TEST_CASE("journal index ranks impact factors among journals") {
    MiniCorpus m;
    m.university("U1").sds("S1", "A").scientist("R1", "U1", "S1", 2004, 2004);
    for (int j = 1; j <= 10; ++j) m.impact_factor("J" + std::to_string(j), 2006, "C1", 0.5 * j);
    m.impact_factor("SOLO", 2006, "C9", 3.0);
    m.impact_factor("J7", 2004, "C1", 9.0);  // other edition, ignored
    m.publication("P7", 2004, "J7", {"C1"}, {"R1"});
    m.publication("P1", 2004, "J1", {"C1"}, {"R1"});
    m.publication("PS", 2004, "SOLO", {"C9"}, {"R1"});
    m.publication("PX", 2004, "J1", {"C1", "C9"}, {"R1"});
    const auto corpus = m.build();
    CHECK(qi_journal(corpus, "P7", 2006).value == doctest::Approx(60.0));
    CHECK(qi_journal(corpus, "P1", 2006).value == 0.0);
    CHECK(qi_journal(corpus, "PS", 2006).value == 0.0);
    CHECK_THROWS_AS(qi_journal(corpus, "PX", 2006), CoverageError);
    CHECK_THROWS_AS(qi_journal(corpus, "P7", 2005), CoverageError);
  }

  TEST_CASE("publication-weighted journal cohorts count articles") {
    MiniCorpus m;
    m.university("U1").sds("S1", "A").scientist("R1", "U1", "S1", 2004, 2004);
    m.impact_factor("LOW", 2006, "C1", 1.0).impact_factor("HIGH", 2006, "C1", 5.0);
    for (int i = 0; i < 3; ++i) m.publication("L" + std::to_string(i), 2004, "LOW", {"C1"}, {"R1"});
    m.publication("H0", 2004, "HIGH", {"C1"}, {"R1"});
    const auto corpus = m.build();
    CHECK(qi_journal(corpus, "H0", 2006, JournalCohortWeighting::journal).value == 50.0);
    CHECK(qi_journal(corpus, "H0", 2006, JournalCohortWeighting::publication).value == 75.0);
  }

  TEST_CASE("cohorts are keyed by category and year") {
    MiniCorpus m;
    m.university("U1").sds("S1", "A").scientist("R1", "U1", "S1", 2004, 2005);
    const Date d(2008, 3, 31);
    m.publication("P1", 2004, "J1", {"C1"}, {"R1"}, {{d, 1}});
    m.publication("P2", 2005, "J1", {"C1"}, {"R1"}, {{d, 2}});
    m.publication("P3", 2005, "J1", {"C1", "C2", "C3"}, {"R1"}, {{d, 3}});
    m.publication("P4", 2005, "J1", {"C1"}, {"R1"}, {{Date(2009, 1, 1), 3}});
    const auto corpus = m.build();
    const auto set = build_cohorts(corpus, Observation::citations(d));
    REQUIRE(set.cohorts.size() == 4);
    CHECK(set.cohorts[0].key.to_string() == "C1@2004");
    CHECK(set.cohorts[1].key.to_string() == "C1@2005");
    int p3 = 0;
    for (const auto& c : set.cohorts) p3 += static_cast<int>(std::count(c.members.begin(), c.members.end(), "P3"));
    CHECK(p3 == 3);
    REQUIRE(set.skipped.size() == 1);
    CHECK(set.skipped[0].publication_id == "P4");

    const auto none = build_cohorts(corpus, Observation::citations(Date(2005, 1, 1)));
    CHECK(none.cohorts.empty());
    CHECK(none.skipped.size() == 4);
  }

  TEST_CASE("bulk scoring agrees with single-publication scoring") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto corpus = synth::generate(testing::lag_config(seed));
      const Date d(2008, 3, 31);
      const auto table = score_corpus(corpus, Observation::citations(d));
      const auto if_table = score_corpus(corpus, Observation::impact_factor(2004));
      int checked = 0;
      for (const auto& [id, score] : table.scores()) {
        CHECK(score.value >= 0.0);
        CHECK(score.value < 100.0);
        if (checked++ % 97 == 0) {
          CHECK(qi_article(corpus, id, d).value == doctest::Approx(score.value).epsilon(1e-12));
          CHECK(qi_journal(corpus, id, 2004).value == doctest::Approx(if_table.find(id)->value).epsilon(1e-12));
        }
      }
      CHECK(table.scores().size() == corpus.publications().size());
    }
  }

  TEST_CASE("proxy and weighting spellings") {
    CHECK(parse_proxy("citations") == Proxy::article_citations);
    CHECK(parse_proxy("impact-factor") == Proxy::journal_impact_factor);
    CHECK_THROWS_AS(parse_proxy("h-index"), InputError);
    CHECK(parse_weighting("publication") == JournalCohortWeighting::publication);
    CHECK_THROWS_AS(parse_weighting("both"), InputError);
  }
}
