#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxyrank/corpus.hpp"
#include "proxyrank/normalize.hpp"

namespace proxyrank {

// How the national reference productivity of an SDS is formed.
//   pooled:          sum of strengths over sum of staff across active universities
//   unweighted_mean: plain mean of the universities' productivities
enum class NationalAverageMode { pooled, unweighted_mean };

std::string_view to_string(NationalAverageMode mode);
NationalAverageMode parse_national_average(std::string_view text);

struct ScientificStrength {
  Id university_id;
  Id sds_id;
  Proxy proxy = Proxy::article_citations;
  double value = 0.0;
  std::size_t publications = 0;
};

struct SdsProductivity {
  Id university_id;
  Id sds_id;
  Proxy proxy = Proxy::article_citations;
  double strength = 0.0;
  double staff = 0.0;
  std::optional<double> value;  // empty when the unit is excluded
  std::string exclusion;        // why, when excluded

  bool excluded() const noexcept { return !value.has_value(); }
};

struct NationalAverage {
  Id sds_id;
  double value = 0.0;
  std::size_t universities = 0;  // active universities pooled

  // A zero national pool carries no signal; such SDSs are left out of UDA roll-ups.
  bool normalizable() const noexcept { return value > 0.0; }
};

struct SdsTerm {
  Id sds_id;
  double ratio = 0.0;  // P_s / P*_s
  double staff = 0.0;
};

struct UdaProductivity {
  Id university_id;
  Id uda_id;
  Proxy proxy = Proxy::article_citations;
  double value = 0.0;  // 1.0 = national average
  double staff = 0.0;  // staff of the SDSs that entered the sum
  std::vector<SdsTerm> terms;
  std::vector<Id> dropped_sds;  // staffed but not normalizable
};

// Publications of the period attributed to each (university, SDS) through the authors'
// affiliations in the publication year. Each publication is listed once per unit; ids ascend.
using Attribution = std::map<std::pair<Id, Id>, std::vector<Id>>;
Attribution attribute(const Corpus& corpus, YearRange period);

// Sum of quality scores over the unit's publications (whole counting).
// Throws CoverageError if an attributable publication has no score.
ScientificStrength scientific_strength(const Corpus& corpus, const ScoreTable& scores,
                                       const Id& university_id, const Id& sds_id, YearRange period,
                                       Proxy proxy);

SdsProductivity sds_productivity(const ScientificStrength& strength, const StaffCount& staff);

// Throws InputError when no listed university has staff in the SDS or ids are mixed.
NationalAverage national_average_sds(std::span<const SdsProductivity> units,
                                     NationalAverageMode mode = NationalAverageMode::pooled);

// Staff-weighted sum of normalized SDS productivities for one university in one UDA.
// Throws InputError if the university has no staffed, normalizable SDS in the UDA.
UdaProductivity uda_productivity(const Corpus& corpus, const std::map<std::pair<Id, Id>, SdsProductivity>& sds,
                                 const std::map<Id, NationalAverage>& national, const Id& university_id,
                                 const Id& uda_id);

struct ProductivityOptions {
  NationalAverageMode national_average = NationalAverageMode::pooled;
};

struct UdaCandidate {
  Id university_id;
  double staff = 0.0;  // UDA head count over the period
  std::optional<UdaProductivity> productivity;
  std::string reason;  // set when productivity is empty
};

// Everything the pipeline derives for one proxy and period.
struct ProductivityReport {
  Proxy proxy = Proxy::article_citations;
  YearRange period;
  std::map<std::pair<Id, Id>, SdsProductivity> sds;  // keyed (university, SDS)
  std::map<Id, NationalAverage> national;
  std::map<Id, std::vector<UdaCandidate>> uda;       // keyed UDA, candidates ascending by university
  std::vector<std::string> warnings;
};

ProductivityReport compute_productivity(const Corpus& corpus, const ScoreTable& scores, YearRange period,
                                        const ProductivityOptions& options = {});

// CSV: university_id,level,unit_id,proxy,value,staff (6 decimals).
void write_productivity_dump(const ProductivityReport& report, std::ostream& out);

}  // namespace proxyrank
