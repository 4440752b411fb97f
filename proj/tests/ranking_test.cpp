#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "proxyrank/ranking.hpp"
#include "proxyrank/report.hpp"
#include "proxyrank/rng.hpp"
#include "support/fixtures.hpp"

using namespace proxyrank;

namespace {

std::vector<RankCandidate> candidates(std::initializer_list<std::pair<const char*, double>> values,
                                      double staff = 10.0) {
  std::vector<RankCandidate> out;
  for (const auto& [id, v] : values) out.push_back(RankCandidate{id, std::string("Name ") + id, staff, v, ""});
  return out;
}

// Ranking with the given ranks for ids U1..Un.
Ranking by_ranks(const std::vector<int>& ranks) {
  std::vector<RankCandidate> c;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    c.push_back(RankCandidate{"U" + std::to_string(i + 1), "Univ " + std::to_string(i + 1), 10.0,
                              1000.0 - ranks[i], ""});
  return rank_universities("A", Proxy::article_citations, c);
}

Ranking biology(const char* file) {
  return report::read_rankings(testing::data_dir() / file).at(0);
}

double pearson_of_ranks(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  return pearson(x, y);
}

}  // namespace

TEST_SUITE("ranking") {
  TEST_CASE("orders by value and applies the staff threshold") {
    auto c = candidates({{"U1", 1.0}, {"U2", 3.0}, {"U3", 2.0}});
    c.push_back(RankCandidate{"U4", "Small", 5.9, 9.0, ""});
    c.push_back(RankCandidate{"U5", "No value", 20.0, std::nullopt, "no staffed SDS"});
    const auto r = rank_universities("A", Proxy::article_citations, c);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].university_id == "U2");
    CHECK(r.entries[1].university_id == "U3");
    CHECK(r.entries[2].university_id == "U1");
    CHECK(r.entries[2].rank == 3);
    REQUIRE(r.excluded.size() == 2);
    CHECK(r.excluded[0].university_id == "U4");
    CHECK(r.excluded[1].reason == "no staffed SDS");
    CHECK(r.find("U4") == nullptr);
  }

  TEST_CASE("ties fall back to university id and are flagged") {
    const auto r = rank_universities("A", Proxy::article_citations, candidates({{"U9", 2.0}, {"U3", 2.0}, {"U5", 1.0}}));
    CHECK(r.entries[0].university_id == "U3");
    CHECK(r.entries[1].university_id == "U9");
    CHECK(r.entries[0].tied);
    CHECK(r.entries[1].tied);
    CHECK_FALSE(r.entries[2].tied);
  }

  TEST_CASE("nobody above the threshold") {
    const auto c = candidates({{"U1", 1.0}}, 2.0);
    CHECK_THROWS_AS(rank_universities("A", Proxy::article_citations, c), InputError);
    CHECK(build_ranking("A", Proxy::article_citations, c).entries.empty());
  }

  TEST_CASE("ranking properties") {
    RandomStream rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<RankCandidate> c;
      const auto n = 2 + rng.below(20);
      for (std::size_t i = 0; i < n; ++i)
        c.push_back(RankCandidate{"U" + std::to_string(100 + i), "", 2.0 + 10.0 * rng.uniform(),
                                  static_cast<double>(rng.below(8)), ""});
      const auto r = build_ranking("A", Proxy::article_citations, c);
      for (std::size_t i = 0; i < r.entries.size(); ++i) {
        CHECK(r.entries[i].rank == static_cast<int>(i + 1));
        if (i > 0) CHECK(r.entries[i - 1].value >= r.entries[i].value);
      }
      auto transformed = c;
      for (auto& x : transformed) x.value = *x.value * *x.value * 7.0 + 3.0;
      const auto t = build_ranking("A", Proxy::article_citations, transformed);
      REQUIRE(t.entries.size() == r.entries.size());
      for (std::size_t i = 0; i < r.entries.size(); ++i) CHECK(t.entries[i].university_id == r.entries[i].university_id);

      auto extended = c;
      extended.push_back(RankCandidate{"U000", "", 1.0, 1e9, ""});
      const auto e = build_ranking("A", Proxy::article_citations, extended);
      for (std::size_t i = 0; i < r.entries.size(); ++i) CHECK(e.entries[i].university_id == r.entries[i].university_id);
    }
  }

  TEST_CASE("identical rankings compare as identity") {
    const auto r = by_ranks({1, 2, 3, 4});
    const auto c = compare_rankings(r, r);
    CHECK(c.changed == 0);
    CHECK(c.pct_changed == 0.0);
    CHECK(c.max_shift == 0);
    CHECK(c.mean_shift == 0.0);
    CHECK(c.median_shift == 0.0);
    CHECK(c.correlation == doctest::Approx(1.0));
  }

  TEST_CASE("full reversal of three") {
    const auto c = compare_rankings(by_ranks({1, 2, 3}), by_ranks({3, 2, 1}));
    CHECK(c.changed == 2);
    CHECK(c.pct_changed == doctest::Approx(200.0 / 3.0));
    CHECK(c.max_shift == 2);
    CHECK(c.mean_shift == doctest::Approx(4.0 / 3.0));
    CHECK(c.median_shift == 2.0);
    CHECK(c.correlation == doctest::Approx(-1.0));
  }

  TEST_CASE("published Biology rank pairs") {
    const auto pa = biology("biology_pa.tsv");
    const auto pj = biology("biology_pj.tsv");
    const auto c = compare_rankings(pa, pj);
    CHECK(c.n_universities == 52);
    CHECK(c.changed == 39);
    CHECK(report::format_fixed(c.pct_changed, 1) == "75.0");
    CHECK(c.max_shift == 13);
    CHECK(report::format_fixed(c.mean_shift, 1) == "2.6");
    CHECK(c.median_shift == 1.5);
    CHECK(c.correlation == doctest::Approx(0.963).epsilon(0.003));

    const auto rows = shift_report(pa, pj);
    CHECK(rows.front().name == "University of Venice \"Ca' Foscari\"");
    CHECK(rows.front().rank_a == 17);
    CHECK(rows.front().rank_b == 30);
    CHECK(rows.front().variation == -13);
    CHECK(rows.back().name == "University of Udine");
    CHECK(rows.back().variation == 12);
    CHECK(std::count_if(rows.begin(), rows.end(), [](const ShiftRow& r) { return r.variation == 0; }) == 13);
    CHECK(std::is_sorted(rows.begin(), rows.end(),
                         [](const ShiftRow& a, const ShiftRow& b) { return a.variation < b.variation; }));
  }

  TEST_CASE("comparison is symmetric and correlation agrees with Pearson on ranks") {
    RandomStream rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const auto n = 2 + rng.below(30);
      std::vector<int> a(n), b(n);
      std::iota(a.begin(), a.end(), 1);
      std::iota(b.begin(), b.end(), 1);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(b[i], b[rng.below(i + 1)]);
      const auto ra = by_ranks(a), rb = by_ranks(b);
      const auto ab = compare_rankings(ra, rb), ba = compare_rankings(rb, ra);
      CHECK(ab.changed == ba.changed);
      CHECK(ab.max_shift == ba.max_shift);
      CHECK(ab.mean_shift == ba.mean_shift);
      CHECK(ab.median_shift == ba.median_shift);
      CHECK(ab.correlation == doctest::Approx(ba.correlation));
      CHECK(spearman_from_ranks(a, b) == doctest::Approx(pearson_of_ranks(a, b)).epsilon(1e-12));
      CHECK(ab.max_shift >= ab.mean_shift);
    }
  }

  TEST_CASE("partial overlap compares the intersection") {
    auto a = by_ranks({1, 2, 3, 4});
    auto b = restrict_to(by_ranks({4, 3, 2, 1}), {"U1", "U2", "U3"}, "dropped");
    const auto c = compare_rankings(a, b);
    CHECK(c.n_universities == 3);
    CHECK_FALSE(c.warnings.empty());
    CHECK(c.correlation == doctest::Approx(-1.0));
    CHECK(b.excluded.back().reason == "dropped");
    CHECK_THROWS_AS(compare_rankings(a, restrict_to(a, {"U1"}, "x")), InputError);
  }

  TEST_CASE("median takes the midpoint of an even count") {
    CHECK(median({3.0, 1.0, 2.0, 0.0}) == 1.5);
    CHECK(median({5.0}) == 5.0);
  }

  TEST_CASE("pearson on values is available") {
    auto a = by_ranks({1, 2, 3});
    auto b = by_ranks({1, 3, 2});
    const auto c = compare_rankings(a, b, CorrelationMethod::pearson_values);
    CHECK(c.correlation == doctest::Approx(0.5));
    CHECK(parse_correlation("pearson-values") == CorrelationMethod::pearson_values);
    CHECK_THROWS_AS(parse_correlation("kendall"), InputError);
  }
}
