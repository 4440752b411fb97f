#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proxyrank/date.hpp"
#include "proxyrank/errors.hpp"

namespace proxyrank {

using Id = std::string;

struct SubjectCategory {
  Id id;
  std::string name;

  bool operator==(const SubjectCategory&) const = default;
};

struct ImpactFactorKey {
  int jcr_edition = 0;
  Id category_id;

  auto operator<=>(const ImpactFactorKey&) const = default;
};

struct Journal {
  Id id;
  std::string name;
  std::map<ImpactFactorKey, double> impact_factors;

  std::optional<double> impact_factor(int jcr_edition, const Id& category_id) const;

  bool operator==(const Journal&) const = default;
};

struct Publication {
  Id id;
  int year = 0;
  Id journal_id;
  std::vector<Id> category_ids;
  // Matched university scientists only; external co-authors are not listed.
  std::vector<Id> author_ids;
  // Cumulative citation counts keyed by observation date.
  std::map<Date, std::int64_t> snapshots;

  // Latest snapshot at or before `date` (counts are step functions of time).
  std::optional<std::int64_t> citations_at(Date date) const;

  bool operator==(const Publication&) const = default;
};

// Inclusive year range of one appointment.
struct Affiliation {
  int year_from = 0;
  int year_to = 0;
  Id university_id;
  Id sds_id;

  bool covers(int year) const noexcept { return year >= year_from && year <= year_to; }
  bool operator==(const Affiliation&) const = default;
};

struct Scientist {
  Id id;
  std::vector<Affiliation> affiliations;

  const Affiliation* affiliation_in(int year) const;

  bool operator==(const Scientist&) const = default;
};

struct Sds {
  Id id;
  std::string name;
  Id uda_id;

  bool operator==(const Sds&) const = default;
};

struct Uda {
  Id id;
  std::string name;

  bool operator==(const Uda&) const = default;
};

struct University {
  Id id;
  std::string name;

  bool operator==(const University&) const = default;
};

struct OrgStructure {
  std::map<Id, Sds> sds;
  std::map<Id, Uda> udas;
  std::map<Id, University> universities;

  bool operator==(const OrgStructure&) const = default;
};

// Mutable, unvalidated corpus contents. Turn into a Corpus with Corpus::create.
struct CorpusData {
  std::map<Id, Publication> publications;
  std::map<Id, Journal> journals;
  std::map<Id, Scientist> scientists;
  OrgStructure structure;

  bool operator==(const CorpusData&) const = default;
};

// Validated, cross-linked and immutable corpus.
class Corpus {
 public:
  // Throws CorpusError listing every invariant violation.
  static Corpus create(CorpusData data);

  const std::map<Id, Publication>& publications() const noexcept { return data_.publications; }
  const std::map<Id, Journal>& journals() const noexcept { return data_.journals; }
  const std::map<Id, Scientist>& scientists() const noexcept { return data_.scientists; }
  const OrgStructure& structure() const noexcept { return data_.structure; }
  const std::map<Id, SubjectCategory>& categories() const noexcept { return categories_; }
  const CorpusData& data() const noexcept { return data_; }

  const Publication& publication(const Id& id) const;
  const Journal& journal(const Id& id) const;
  const University& university(const Id& id) const;
  const Sds& sds(const Id& id) const;
  // SDS ids of a UDA, ascending.
  std::vector<Id> sds_of(const Id& uda_id) const;
  // Every observation date that appears in any snapshot.
  std::set<Date> snapshot_dates() const;

  bool operator==(const Corpus& other) const { return data_ == other.data_; }

 private:
  explicit Corpus(CorpusData data);

  CorpusData data_;
  std::map<Id, SubjectCategory> categories_;
};

// Where a record came from, for error reporting. Used by the loader.
enum class Entity { publication, snapshot, journal, impact_factor, scientist, affiliation, sds, university };

struct SourceIndex {
  std::map<std::pair<Entity, Id>, std::size_t> lines;

  void note(Entity entity, const Id& key, std::size_t line);
  std::size_t line(Entity entity, const Id& key) const;
};

const char* file_name(Entity entity);

// Checks every invariant of a corpus; empty result means valid.
std::vector<Issue> validate(const CorpusData& data, const SourceIndex* source = nullptr);

// Standard file names inside a corpus directory.
struct CorpusPaths {
  std::filesystem::path publications;
  std::filesystem::path snapshots;
  std::filesystem::path journals;
  std::filesystem::path impact_factors;
  std::filesystem::path scientists;
  std::filesystem::path affiliations;
  std::filesystem::path structure;
  std::filesystem::path universities;

  static CorpusPaths in_directory(const std::filesystem::path& dir);
  std::vector<std::filesystem::path> all() const;
};

Corpus load_corpus(const CorpusPaths& paths);
Corpus load_corpus(const std::filesystem::path& dir);

// Writes the eight CSV files. Output is byte-stable for equal corpora.
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

struct StaffCount {
  Id university_id;
  Id sds_id;
  double value = 0.0;  // average head count over the period
};

// Mean over the period's years of the number of scientists affiliated with (university, SDS).
StaffCount staff_count(const Corpus& corpus, const Id& university_id, const Id& sds_id,
                       YearRange period);

// Staff of every (university, SDS) pair with nonzero presence in the period.
using StaffTable = std::map<std::pair<Id, Id>, double>;
StaffTable staff_table(const Corpus& corpus, YearRange period);

}  // namespace proxyrank
