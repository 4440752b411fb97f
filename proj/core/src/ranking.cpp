#include "proxyrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include <fmt/format.h>

namespace proxyrank {

const RankedUniversity* Ranking::find(const Id& university_id) const {
  for (const auto& e : entries)
    if (e.university_id == university_id) return &e;
  return nullptr;
}

namespace {

void assign_ranks(std::vector<RankedUniversity>& entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<int>(i) + 1;
    entries[i].tied = (i > 0 && entries[i - 1].value == entries[i].value) ||
                      (i + 1 < entries.size() && entries[i + 1].value == entries[i].value);
  }
}

}  // namespace

Ranking build_ranking(const Id& uda_id, Proxy proxy, std::span<const RankCandidate> candidates,
                      double min_staff) {
  Ranking out;
  out.uda_id = uda_id;
  out.proxy = proxy;
  for (const auto& c : candidates) {
    if (c.staff < min_staff) {
      out.excluded.push_back({c.university_id, c.name, c.staff,
                              fmt::format("staff {:.2f} below minimum {:g}", c.staff, min_staff)});
    } else if (!c.value) {
      out.excluded.push_back({c.university_id, c.name, c.staff, c.reason.empty() ? "no productivity" : c.reason});
    } else {
      out.entries.push_back({c.university_id, c.name, c.staff, *c.value, 0, false});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const RankedUniversity& x, const RankedUniversity& y) {
    if (x.value != y.value) return x.value > y.value;
    return x.university_id < y.university_id;
  });
  assign_ranks(out.entries);
  std::sort(out.excluded.begin(), out.excluded.end(),
            [](const Exclusion& x, const Exclusion& y) { return x.university_id < y.university_id; });
  return out;
}

Ranking rank_universities(const Id& uda_id, Proxy proxy, std::span<const RankCandidate> candidates,
                          double min_staff) {
  auto out = build_ranking(uda_id, proxy, candidates, min_staff);
  if (out.entries.empty())
    throw InputError(fmt::format("no university in UDA '{}' passes the staff threshold", uda_id));
  return out;
}

Ranking restrict_to(const Ranking& ranking, const std::set<Id>& keep, const std::string& reason) {
  Ranking out = ranking;
  out.entries.clear();
  for (const auto& e : ranking.entries) {
    if (keep.contains(e.university_id))
      out.entries.push_back(e);
    else
      out.excluded.push_back({e.university_id, e.name, e.staff, reason});
  }
  assign_ranks(out.entries);
  std::sort(out.excluded.begin(), out.excluded.end(),
            [](const Exclusion& x, const Exclusion& y) { return x.university_id < y.university_id; });
  return out;
}

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::spearman ? "spearman" : "pearson-values";
}

CorrelationMethod parse_correlation(std::string_view text) {
  if (text == "spearman") return CorrelationMethod::spearman;
  if (text == "pearson-values") return CorrelationMethod::pearson_values;
  throw InputError(fmt::format("unknown correlation '{}' (expected spearman or pearson-values)", text));
}

double spearman_from_ranks(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.size() < 2) throw InputError("rank correlation needs two equal vectors, n >= 2");
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw InputError("correlation needs two equal vectors, n >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw InputError("correlation undefined for a constant vector");
  return sab / std::sqrt(saa * sbb);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty set");
  std::sort(values.begin(), values.end());
  const auto mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

namespace {

std::set<Id> ids_of(const Ranking& r) {
  std::set<Id> out;
  for (const auto& e : r.entries) out.insert(e.university_id);
  return out;
}

// Both rankings over their common universities, re-ranked when the sets differ.
std::pair<Ranking, Ranking> aligned(const Ranking& a, const Ranking& b, std::vector<std::string>& warnings) {
  const auto ia = ids_of(a);
  const auto ib = ids_of(b);
  std::set<Id> common;
  std::set_intersection(ia.begin(), ia.end(), ib.begin(), ib.end(), std::inserter(common, common.end()));
  if (common.size() < 2)
    throw InputError(fmt::format("rankings for UDA '{}' share {} universities; need at least 2", a.uda_id,
                                 common.size()));
  if (common.size() != ia.size() || common.size() != ib.size()) {
    warnings.push_back(fmt::format("UDA '{}': rankings cover different universities ({} vs {}); compared on {} common",
                                   a.uda_id, ia.size(), ib.size(), common.size()));
    return {restrict_to(a, common, "not in the other ranking"), restrict_to(b, common, "not in the other ranking")};
  }
  return {a, b};
}

}  // namespace

RankingComparison compare_rankings(const Ranking& a, const Ranking& b, CorrelationMethod method) {
  RankingComparison out;
  out.uda_id = a.uda_id;
  out.uda_name = a.uda_name.empty() ? b.uda_name : a.uda_name;
  if (a.uda_id != b.uda_id)
    out.warnings.push_back(fmt::format("comparing rankings of different UDAs '{}' and '{}'", a.uda_id, b.uda_id));
  auto [ra, rb] = aligned(a, b, out.warnings);

  std::vector<int> rank_a;
  std::vector<int> rank_b;
  std::vector<double> value_a;
  std::vector<double> value_b;
  std::vector<double> shifts;
  for (const auto& e : ra.entries) {
    const auto* other = rb.find(e.university_id);
    rank_a.push_back(e.rank);
    rank_b.push_back(other->rank);
    value_a.push_back(e.value);
    value_b.push_back(other->value);
    const int shift = std::abs(e.rank - other->rank);
    shifts.push_back(shift);
    if (shift != 0) ++out.changed;
    out.max_shift = std::max(out.max_shift, shift);
  }
  out.n_universities = shifts.size();
  const double n = static_cast<double>(out.n_universities);
  out.pct_changed = 100.0 * static_cast<double>(out.changed) / n;
  out.mean_shift = std::accumulate(shifts.begin(), shifts.end(), 0.0) / n;
  out.median_shift = median(shifts);
  out.correlation = method == CorrelationMethod::spearman ? spearman_from_ranks(rank_a, rank_b)
                                                          : pearson(value_a, value_b);
  return out;
}

std::vector<ShiftRow> shift_report(const Ranking& a, const Ranking& b) {
  std::vector<std::string> warnings;
  auto [ra, rb] = aligned(a, b, warnings);
  std::vector<ShiftRow> rows;
  for (const auto& e : ra.entries) {
    const auto* other = rb.find(e.university_id);
    rows.push_back({e.university_id, e.name, e.staff, e.rank, other->rank, e.rank - other->rank});
  }
  std::sort(rows.begin(), rows.end(), [](const ShiftRow& x, const ShiftRow& y) {
    if (x.variation != y.variation) return x.variation < y.variation;
    if (x.name != y.name) return x.name < y.name;
    return x.university_id < y.university_id;
  });
  return rows;
}

}  // namespace proxyrank
