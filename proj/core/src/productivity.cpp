#include "proxyrank/productivity.hpp"

#include <set>

#include <fmt/format.h>

#include "proxyrank/csv.hpp"

namespace proxyrank {

std::string_view to_string(NationalAverageMode mode) {
  return mode == NationalAverageMode::pooled ? "pooled" : "mean";
}

NationalAverageMode parse_national_average(std::string_view text) {
  if (text == "pooled") return NationalAverageMode::pooled;
  if (text == "mean") return NationalAverageMode::unweighted_mean;
  throw InputError(fmt::format("unknown national average '{}' (expected pooled or mean)", text));
}

namespace {

// Units (university, SDS) with at least one author of the publication in its year.
std::set<std::pair<Id, Id>> units_of(const Corpus& corpus, const Publication& pub) {
  std::set<std::pair<Id, Id>> units;
  for (const auto& author : pub.author_ids) {
    const auto& scientist = corpus.scientists().at(author);
    if (const auto* a = scientist.affiliation_in(pub.year)) units.emplace(a->university_id, a->sds_id);
  }
  return units;
}

const QualityScore& require_score(const ScoreTable& scores, const Id& publication_id) {
  const auto* s = scores.find(publication_id);
  if (s) return *s;
  std::string reason;
  for (const auto& skip : scores.skipped())
    if (skip.publication_id == publication_id) reason = skip.reason;
  throw CoverageError(reason.empty()
                          ? fmt::format("no {} score for attributable publication '{}'",
                                        scores.observation().describe(), publication_id)
                          : reason);
}

}  // namespace

Attribution attribute(const Corpus& corpus, YearRange period) {
  Attribution out;
  for (const auto& [id, pub] : corpus.publications()) {
    if (!period.contains(pub.year)) continue;
    for (const auto& unit : units_of(corpus, pub)) out[unit].push_back(id);
  }
  return out;
}

ScientificStrength scientific_strength(const Corpus& corpus, const ScoreTable& scores, const Id& university_id,
                                       const Id& sds_id, YearRange period, Proxy proxy) {
  if (scores.observation().proxy != proxy)
    throw InputError(fmt::format("score table holds {} scores, {} requested",
                                 to_string(scores.observation().proxy), to_string(proxy)));
  ScientificStrength out{university_id, sds_id, proxy, 0.0, 0};
  const std::pair<Id, Id> unit{university_id, sds_id};
  for (const auto& [id, pub] : corpus.publications()) {
    if (!period.contains(pub.year) || !units_of(corpus, pub).contains(unit)) continue;
    out.value += require_score(scores, id).value;
    ++out.publications;
  }
  return out;
}

SdsProductivity sds_productivity(const ScientificStrength& strength, const StaffCount& staff) {
  SdsProductivity out{strength.university_id, strength.sds_id, strength.proxy, strength.value, staff.value,
                      std::nullopt, {}};
  if (staff.value > 0.0)
    out.value = strength.value / staff.value;
  else
    out.exclusion = "no staff in the period";
  return out;
}

NationalAverage national_average_sds(std::span<const SdsProductivity> units, NationalAverageMode mode) {
  NationalAverage out;
  double strength = 0.0;
  double staff = 0.0;
  double sum_values = 0.0;
  for (const auto& u : units) {
    if (out.sds_id.empty()) out.sds_id = u.sds_id;
    if (u.sds_id != out.sds_id)
      throw InputError(fmt::format("national average over mixed SDSs '{}' and '{}'", out.sds_id, u.sds_id));
    if (u.excluded()) continue;
    strength += u.strength;
    staff += u.staff;
    sum_values += *u.value;
    ++out.universities;
  }
  if (out.universities == 0)
    throw InputError(fmt::format("SDS '{}' has no university with staff", out.sds_id));
  out.value = mode == NationalAverageMode::pooled ? strength / staff
                                                  : sum_values / static_cast<double>(out.universities);
  return out;
}

UdaProductivity uda_productivity(const Corpus& corpus, const std::map<std::pair<Id, Id>, SdsProductivity>& sds,
                                 const std::map<Id, NationalAverage>& national, const Id& university_id,
                                 const Id& uda_id) {
  UdaProductivity out{university_id, uda_id, Proxy::article_citations, 0.0, 0.0, {}, {}};
  bool any_staffed = false;
  for (const auto& sds_id : corpus.sds_of(uda_id)) {
    auto it = sds.find({university_id, sds_id});
    if (it == sds.end() || it->second.excluded()) continue;
    any_staffed = true;
    out.proxy = it->second.proxy;
    auto nat = national.find(sds_id);
    if (nat == national.end() || !nat->second.normalizable()) {
      out.dropped_sds.push_back(sds_id);
      continue;
    }
    out.terms.push_back({sds_id, *it->second.value / nat->second.value, it->second.staff});
    out.staff += it->second.staff;
  }
  if (!any_staffed)
    throw InputError(fmt::format("university '{}' has no staffed SDS in UDA '{}'", university_id, uda_id));
  if (out.terms.empty())
    throw InputError(
        fmt::format("university '{}' has no normalizable SDS in UDA '{}'", university_id, uda_id));
  for (const auto& t : out.terms) out.value += t.ratio * (t.staff / out.staff);
  return out;
}

ProductivityReport compute_productivity(const Corpus& corpus, const ScoreTable& scores, YearRange period,
                                        const ProductivityOptions& options) {
  ProductivityReport report;
  report.proxy = scores.observation().proxy;
  report.period = period;

  const auto staff = staff_table(corpus, period);
  const auto attribution = attribute(corpus, period);

  std::set<std::pair<Id, Id>> units;
  for (const auto& [unit, v] : staff) units.insert(unit);
  for (const auto& [unit, v] : attribution) units.insert(unit);

  for (const auto& unit : units) {
    ScientificStrength ss{unit.first, unit.second, report.proxy, 0.0, 0};
    if (auto it = attribution.find(unit); it != attribution.end()) {
      for (const auto& pid : it->second) ss.value += require_score(scores, pid).value;
      ss.publications = it->second.size();
    }
    auto st = staff.find(unit);
    const StaffCount sc{unit.first, unit.second, st == staff.end() ? 0.0 : st->second};
    report.sds.emplace(unit, sds_productivity(ss, sc));
  }

  std::map<Id, std::vector<SdsProductivity>> by_sds;
  for (const auto& [unit, p] : report.sds)
    if (!p.excluded()) by_sds[unit.second].push_back(p);
  for (const auto& [sds_id, list] : by_sds) {
    auto nat = national_average_sds(list, options.national_average);
    if (!nat.normalizable())
      report.warnings.push_back(fmt::format("SDS '{}' has zero national output; left out of UDA roll-ups", sds_id));
    report.national.emplace(sds_id, nat);
  }

  for (const auto& [uda_id, uda] : corpus.structure().udas) {
    const auto members = corpus.sds_of(uda_id);
    std::map<Id, double> uda_staff;
    for (const auto& sds_id : members)
      for (const auto& [unit, v] : staff)
        if (unit.second == sds_id) uda_staff[unit.first] += v;
    auto& candidates = report.uda[uda_id];
    for (const auto& [uni, head_count] : uda_staff) {
      UdaCandidate c{uni, head_count, std::nullopt, {}};
      try {
        auto p = uda_productivity(corpus, report.sds, report.national, uni, uda_id);
        p.proxy = report.proxy;
        for (const auto& d : p.dropped_sds)
          report.warnings.push_back(
              fmt::format("university '{}': SDS '{}' dropped from UDA '{}' roll-up", uni, d, uda_id));
        c.productivity = std::move(p);
      } catch (const InputError& e) {
        c.reason = e.what();
      }
      candidates.push_back(std::move(c));
    }
  }
  return report;
}

void write_productivity_dump(const ProductivityReport& report, std::ostream& out) {
  out << "university_id,level,unit_id,proxy,value,staff\n";
  const std::string proxy{to_string(report.proxy)};
  for (const auto& [unit, p] : report.sds) {
    if (p.excluded()) continue;
    out << csv::join_row({unit.first, "sds", unit.second, proxy, fmt::format("{:.6f}", *p.value),
                          fmt::format("{:.6f}", p.staff)})
        << '\n';
  }
  for (const auto& [uda_id, candidates] : report.uda)
    for (const auto& c : candidates) {
      if (!c.productivity) continue;
      out << csv::join_row({c.university_id, "uda", uda_id, proxy, fmt::format("{:.6f}", c.productivity->value),
                            fmt::format("{:.6f}", c.staff)})
          << '\n';
    }
}

}  // namespace proxyrank
