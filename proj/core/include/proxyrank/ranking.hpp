#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "proxyrank/corpus.hpp"
#include "proxyrank/normalize.hpp"

namespace proxyrank {

struct RankedUniversity {
  Id university_id;
  std::string name;
  double staff = 0.0;
  double value = 0.0;
  int rank = 0;
  bool tied = false;  // shares its value with a neighbour; order fell back to university id
};

struct Exclusion {
  Id university_id;
  std::string name;
  double staff = 0.0;
  std::string reason;
};

struct Ranking {
  Id uda_id;
  std::string uda_name;
  Proxy proxy = Proxy::article_citations;
  std::vector<RankedUniversity> entries;  // rank 1 first
  std::vector<Exclusion> excluded;

  const RankedUniversity* find(const Id& university_id) const;
};

struct RankCandidate {
  Id university_id;
  std::string name;
  double staff = 0.0;
  std::optional<double> value;
  std::string reason;  // why there is no value
};

inline constexpr double kDefaultMinStaff = 6.0;

// Drops units below `min_staff` (and units without a value), then ranks by value descending.
// Ties are broken by ascending university id and flagged. May return an empty ranking.
Ranking build_ranking(const Id& uda_id, Proxy proxy, std::span<const RankCandidate> candidates,
                      double min_staff = kDefaultMinStaff);

// As build_ranking, but throws InputError if nobody is left.
Ranking rank_universities(const Id& uda_id, Proxy proxy, std::span<const RankCandidate> candidates,
                          double min_staff = kDefaultMinStaff);

// Keeps only `keep`, re-ranking 1..N in the original order. Dropped entries become exclusions.
Ranking restrict_to(const Ranking& ranking, const std::set<Id>& keep, const std::string& reason);

enum class CorrelationMethod { spearman, pearson_values };

std::string_view to_string(CorrelationMethod method);
CorrelationMethod parse_correlation(std::string_view text);

struct RankingComparison {
  Id uda_id;
  std::string uda_name;
  std::size_t n_universities = 0;
  std::size_t changed = 0;
  double pct_changed = 0.0;
  int max_shift = 0;
  double mean_shift = 0.0;
  double median_shift = 0.0;
  double correlation = 0.0;
  std::vector<std::string> warnings;
};

// Spearman correlation of two rankings of the same n items (ranks are permutations of 1..n).
double spearman_from_ranks(std::span<const int> a, std::span<const int> b);
double pearson(std::span<const double> a, std::span<const double> b);
double median(std::vector<double> values);

// Statistics of |rank_a - rank_b| over the universities both rankings include.
// Throws InputError with fewer than two common universities.
RankingComparison compare_rankings(const Ranking& a, const Ranking& b,
                                   CorrelationMethod method = CorrelationMethod::spearman);

struct ShiftRow {
  Id university_id;
  std::string name;
  double staff = 0.0;
  int rank_a = 0;
  int rank_b = 0;
  int variation = 0;  // rank_a - rank_b
};

// Per-university rank change, sorted by variation then university name.
std::vector<ShiftRow> shift_report(const Ranking& a, const Ranking& b);

}  // namespace proxyrank
