#pragma once

// Brute-force recomputation of the productivity pipeline straight from the corpus CSV
// files. Shares no code with the library: its own parsing, string dates, O(n^2) percentiles.

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace proxyrank::oracle {

// 100 * (members strictly below value) / size, by pairwise comparison.
std::vector<double> percentiles(const std::vector<double>& cohort);

struct Query {
  int first_year = 0;
  int last_year = 0;
  bool citations = true;
  std::string date;     // ISO, citation proxy
  int jcr_edition = 0;  // impact-factor proxy
};

struct Result {
  std::map<std::string, double> quality;                                  // publication -> QI
  std::map<std::pair<std::string, std::string>, double> sds_ratio;        // (univ, sds) -> P/P*
  std::map<std::pair<std::string, std::string>, double> uda_productivity;  // (univ, uda)
};

Result recompute(const std::filesystem::path& corpus_dir, const Query& query);

}  // namespace proxyrank::oracle
