#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proxyrank/corpus.hpp"
#include "proxyrank/synth.hpp"

namespace proxyrank::testing {

std::filesystem::path data_dir();

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& path);
void spit(const std::filesystem::path& path, std::string_view text);
// Every regular file under `dir`, keyed by relative path, with its bytes.
std::map<std::string, std::string> snapshot_tree(const std::filesystem::path& dir);

// In-code corpus construction for unit tests.
class MiniCorpus {
 public:
  MiniCorpus& university(const Id& id);
  MiniCorpus& sds(const Id& id, const Id& uda_id);
  MiniCorpus& scientist(const Id& id, const Id& university_id, const Id& sds_id, int year_from, int year_to);
  MiniCorpus& impact_factor(const Id& journal_id, int edition, const Id& category_id, double value);
  MiniCorpus& journal(const Id& id);
  MiniCorpus& publication(const Id& id, int year, const Id& journal_id, std::vector<Id> categories,
                          std::vector<Id> authors, std::map<Date, std::int64_t> snapshots = {});
  CorpusData& data() noexcept { return data_; }
  Corpus build() const { return Corpus::create(data_); }

 private:
  CorpusData data_;
};

// One-UDA corpora small enough for brute-force recomputation (at most 5 universities,
// 3 SDSs and, most of the time, 20 publications).
synth::SynthConfig micro_config(std::uint64_t seed);
// Two disciplines whose citation peaks are two and three years after publication.
synth::SynthConfig lag_config(std::uint64_t seed);

}  // namespace proxyrank::testing
