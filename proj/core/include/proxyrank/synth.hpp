#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "proxyrank/corpus.hpp"

namespace proxyrank::synth {

// Citation life cycle and quality structure of one disciplinary area.
struct DisciplineProfile {
  Id uda_id;
  std::string name;
  int sds_count = 3;
  int category_count = 2;
  double peak_lag_years = 2.0;     // mode of the citation rate after publication
  double accrual_shape = 3.0;      // gamma shape of the accrual rate, > 1
  double citation_log_mean = 2.0;  // log-scale centre of lifetime citations
  double citation_log_sd = 1.0;    // log-scale spread; drives right skew
  double journal_coupling = 0.6;   // share of log-citation variance due to the journal

  void validate() const;  // throws ConfigError
};

struct SynthConfig {
  std::uint64_t seed = 0;
  int universities = 30;
  YearRange period{2004, 2006};
  std::vector<Date> snapshot_dates;
  std::vector<int> jcr_editions;
  int journals_per_category = 10;
  double scientists_per_sds = 6.0;           // mean head count of a university in one SDS
  double university_size_spread = 0.5;       // log-sd of university size
  double publications_per_scientist_year = 1.2;
  double output_spread = 0.3;                // log-sd of university output rate
  double quality_effect = 0.3;               // correlation of article quality with the university
  double journal_selectivity = 0.0;          // correlation of journal choice with the university
  double extra_authors = 0.4;                // mean extra matched co-authors per publication
  double multi_category_share = 0.15;        // journals listed in a second category
  int journal_volume = 40;                   // articles per journal-year behind each impact factor
  double turnover = 0.05;                    // share of scientists present for part of the period
  bool timing_noise = true;                  // random publication dates and citation arrivals
  std::vector<DisciplineProfile> profiles;   // one per UDA

  void validate() const;  // throws ConfigError
  // Canonical key = value rendering, parseable by parse_config.
  std::string to_text() const;
};

// Flat `key = value` file with `[uda.<ID>]` sections. `#` starts a comment.
// Throws ConfigError carrying the offending line; a missing `seed` is an error.
SynthConfig parse_config(std::string_view text);
SynthConfig read_config(const std::filesystem::path& path);

// Fraction of lifetime citations received `lag_years` after publication: the CDF of a gamma
// distribution whose mode is the profile's peak lag. Throws InputError for negative lag.
double accrual_fraction(const DisciplineProfile& profile, double lag_years);

Corpus generate(const SynthConfig& config);
void generate_files(const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace proxyrank::synth
