#include "proxyrank/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "proxyrank/csv.hpp"

namespace proxyrank {

namespace fs = std::filesystem;

std::optional<double> Journal::impact_factor(int jcr_edition, const Id& category_id) const {
  auto it = impact_factors.find(ImpactFactorKey{jcr_edition, category_id});
  if (it == impact_factors.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> Publication::citations_at(Date date) const {
  auto it = snapshots.upper_bound(date);
  if (it == snapshots.begin()) return std::nullopt;
  return std::prev(it)->second;
}

const Affiliation* Scientist::affiliation_in(int year) const {
  for (const auto& a : affiliations)
    if (a.covers(year)) return &a;
  return nullptr;
}

const char* file_name(Entity entity) {
  switch (entity) {
    case Entity::publication: return "publications.csv";
    case Entity::snapshot: return "snapshots.csv";
    case Entity::journal: return "journals.csv";
    case Entity::impact_factor: return "impact_factors.csv";
    case Entity::scientist: return "scientists.csv";
    case Entity::affiliation: return "affiliations.csv";
    case Entity::sds: return "structure.csv";
    case Entity::university: return "universities.csv";
  }
  return "?";
}

void SourceIndex::note(Entity entity, const Id& key, std::size_t line) {
  lines.emplace(std::pair{entity, key}, line);
}

std::size_t SourceIndex::line(Entity entity, const Id& key) const {
  auto it = lines.find({entity, key});
  return it == lines.end() ? 0 : it->second;
}

std::vector<Issue> validate(const CorpusData& data, const SourceIndex* source) {
  std::vector<Issue> issues;
  auto report = [&](Entity entity, const Id& key, std::string message) {
    issues.push_back(Issue{file_name(entity), source ? source->line(entity, key) : 0, key,
                           std::move(message)});
  };

  const auto& org = data.structure;
  for (const auto& [id, sds] : org.sds) {
    if (!org.udas.contains(sds.uda_id))
      report(Entity::sds, id, fmt::format("SDS maps to unknown UDA '{}'", sds.uda_id));
  }

  for (const auto& [id, journal] : data.journals) {
    for (const auto& [key, value] : journal.impact_factors) {
      if (!(value >= 0.0) || !std::isfinite(value))
        report(Entity::impact_factor, id,
               fmt::format("impact factor must be a finite value >= 0, got {}", value));
    }
  }

  for (const auto& [id, pub] : data.publications) {
    if (!data.journals.contains(pub.journal_id))
      report(Entity::publication, id, fmt::format("unknown journal id '{}'", pub.journal_id));
    if (pub.category_ids.empty()) report(Entity::publication, id, "publication has no subject category");
    for (const auto& author : pub.author_ids) {
      if (!data.scientists.contains(author))
        report(Entity::publication, id, fmt::format("unknown scientist id '{}'", author));
    }
    const Date earliest(pub.year, 1, 1);
    std::optional<std::int64_t> previous;
    for (const auto& [date, count] : pub.snapshots) {
      if (count < 0)
        report(Entity::snapshot, id, fmt::format("negative citation count at {}", date.iso()));
      if (date < earliest)
        report(Entity::snapshot, id,
               fmt::format("snapshot {} precedes publication year {}", date.iso(), pub.year));
      if (previous && count < *previous)
        report(Entity::snapshot, id,
               fmt::format("cumulative citations decrease to {} at {} (was {})", count, date.iso(),
                           *previous));
      previous = count;
    }
  }

  for (const auto& [id, scientist] : data.scientists) {
    std::vector<const Affiliation*> sorted;
    for (const auto& a : scientist.affiliations) {
      if (a.year_from > a.year_to)
        report(Entity::affiliation, id,
               fmt::format("year_from {} after year_to {}", a.year_from, a.year_to));
      if (!org.universities.contains(a.university_id))
        report(Entity::affiliation, id, fmt::format("unknown university id '{}'", a.university_id));
      if (!org.sds.contains(a.sds_id))
        report(Entity::affiliation, id, fmt::format("unknown SDS id '{}'", a.sds_id));
      sorted.push_back(&a);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Affiliation* x, const Affiliation* y) { return x->year_from < y->year_from; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i]->year_from <= sorted[i - 1]->year_to)
        report(Entity::affiliation, id,
               fmt::format("more than one affiliation in year {}", sorted[i]->year_from));
    }
  }
  return issues;
}

Corpus::Corpus(CorpusData data) : data_(std::move(data)) {
  for (const auto& [id, pub] : data_.publications)
    for (const auto& c : pub.category_ids) categories_.emplace(c, SubjectCategory{c, c});
  for (const auto& [id, journal] : data_.journals)
    for (const auto& [key, value] : journal.impact_factors)
      categories_.emplace(key.category_id, SubjectCategory{key.category_id, key.category_id});
}

Corpus Corpus::create(CorpusData data) {
  auto issues = validate(data);
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return Corpus(std::move(data));
}

namespace {

template <typename Map>
const auto& lookup(const Map& map, const Id& id, const char* what) {
  auto it = map.find(id);
  if (it == map.end()) throw InputError(fmt::format("unknown {} id '{}'", what, id));
  return it->second;
}

}  // namespace

const Publication& Corpus::publication(const Id& id) const {
  return lookup(data_.publications, id, "publication");
}
const Journal& Corpus::journal(const Id& id) const { return lookup(data_.journals, id, "journal"); }
const University& Corpus::university(const Id& id) const {
  return lookup(data_.structure.universities, id, "university");
}
const Sds& Corpus::sds(const Id& id) const { return lookup(data_.structure.sds, id, "SDS"); }

std::vector<Id> Corpus::sds_of(const Id& uda_id) const {
  std::vector<Id> out;
  for (const auto& [id, sds] : data_.structure.sds)
    if (sds.uda_id == uda_id) out.push_back(id);
  return out;
}

std::set<Date> Corpus::snapshot_dates() const {
  std::set<Date> out;
  for (const auto& [id, pub] : data_.publications)
    for (const auto& [date, count] : pub.snapshots) out.insert(date);
  return out;
}

// ---------------------------------------------------------------------------
// Loading

CorpusPaths CorpusPaths::in_directory(const fs::path& dir) {
  return CorpusPaths{dir / "publications.csv", dir / "snapshots.csv",  dir / "journals.csv",
                     dir / "impact_factors.csv", dir / "scientists.csv", dir / "affiliations.csv",
                     dir / "structure.csv",    dir / "universities.csv"};
}

std::vector<fs::path> CorpusPaths::all() const {
  return {publications, snapshots, journals, impact_factors, scientists, affiliations, structure, universities};
}

namespace {

class Reader {
 public:
  explicit Reader(std::vector<Issue>& issues) : issues_(issues) {}

  // Returns false (and records the problem) when the file or a column is missing.
  bool open(const fs::path& path, std::vector<std::string> columns) {
    file_ = path.filename().string();
    cols_.clear();
    if (!fs::exists(path)) {
      issues_.push_back(Issue{file_, 0, "", "missing file " + path.string()});
      return false;
    }
    table_ = csv::Table::read(path);
    bool ok = true;
    for (const auto& c : columns) {
      auto idx = table_.column(c);
      if (!idx) {
        issues_.push_back(Issue{file_, 1, c, "missing column '" + c + "'"});
        ok = false;
      }
      cols_.push_back(idx.value_or(0));
    }
    return ok;
  }

  const std::vector<csv::Record>& rows() const { return table_.rows(); }

  // Field by declared column position; flags short rows.
  std::optional<std::string> field(const csv::Record& r, std::size_t col) {
    if (cols_[col] >= r.fields.size()) {
      issues_.push_back(Issue{file_, r.line, "", "row has too few fields"});
      return std::nullopt;
    }
    return r.fields[cols_[col]];
  }

  template <typename T>
  std::optional<T> number(const csv::Record& r, const std::string& text, const Id& key, const char* what) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
      issues_.push_back(Issue{file_, r.line, key, fmt::format("{} '{}' is not a valid number", what, text)});
      return std::nullopt;
    }
    return value;
  }

  void error(const csv::Record& r, const Id& key, std::string message) {
    issues_.push_back(Issue{file_, r.line, key, std::move(message)});
  }

 private:
  std::vector<Issue>& issues_;
  csv::Table table_;
  std::string file_;
  std::vector<std::size_t> cols_;
};

}  // namespace

Corpus load_corpus(const CorpusPaths& paths) {
  std::vector<Issue> issues;
  CorpusData data;
  SourceIndex source;
  Reader rd(issues);

  if (rd.open(paths.universities, {"id", "name"})) {
    for (const auto& r : rd.rows()) {
      auto id = rd.field(r, 0);
      auto name = rd.field(r, 1);
      if (!id || !name) continue;
      if (!data.structure.universities.emplace(*id, University{*id, *name}).second) {
        rd.error(r, *id, "duplicate university id");
        continue;
      }
      source.note(Entity::university, *id, r.line);
    }
  }

  if (rd.open(paths.structure, {"sds_id", "sds_name", "uda_id", "uda_name"})) {
    for (const auto& r : rd.rows()) {
      auto sid = rd.field(r, 0);
      auto sname = rd.field(r, 1);
      auto uid = rd.field(r, 2);
      auto uname = rd.field(r, 3);
      if (!sid || !sname || !uid || !uname) continue;
      if (!data.structure.sds.emplace(*sid, Sds{*sid, *sname, *uid}).second) {
        rd.error(r, *sid, "duplicate SDS id");
        continue;
      }
      source.note(Entity::sds, *sid, r.line);
      auto [it, inserted] = data.structure.udas.emplace(*uid, Uda{*uid, *uname});
      if (!inserted && it->second.name != *uname)
        rd.error(r, *uid, fmt::format("UDA name '{}' conflicts with earlier '{}'", *uname, it->second.name));
    }
  }

  if (rd.open(paths.journals, {"id", "name"})) {
    for (const auto& r : rd.rows()) {
      auto id = rd.field(r, 0);
      auto name = rd.field(r, 1);
      if (!id || !name) continue;
      if (!data.journals.emplace(*id, Journal{*id, *name, {}}).second) {
        rd.error(r, *id, "duplicate journal id");
        continue;
      }
      source.note(Entity::journal, *id, r.line);
    }
  }

  if (rd.open(paths.impact_factors, {"journal_id", "jcr_edition_year", "category_id", "impact_factor"})) {
    for (const auto& r : rd.rows()) {
      auto jid = rd.field(r, 0);
      auto ed = rd.field(r, 1);
      auto cat = rd.field(r, 2);
      auto val = rd.field(r, 3);
      if (!jid || !ed || !cat || !val) continue;
      auto edition = rd.number<int>(r, *ed, *jid, "jcr_edition_year");
      auto value = rd.number<double>(r, *val, *jid, "impact_factor");
      if (!edition || !value) continue;
      auto it = data.journals.find(*jid);
      if (it == data.journals.end()) {
        rd.error(r, *jid, fmt::format("unknown journal id '{}'", *jid));
        continue;
      }
      if (cat->empty()) {
        rd.error(r, *jid, "empty category_id");
        continue;
      }
      if (!it->second.impact_factors.emplace(ImpactFactorKey{*edition, *cat}, *value).second) {
        rd.error(r, *jid, fmt::format("duplicate impact factor for edition {} category {}", *edition, *cat));
        continue;
      }
      source.note(Entity::impact_factor, *jid, r.line);
    }
  }

  if (rd.open(paths.scientists, {"id"})) {
    for (const auto& r : rd.rows()) {
      auto id = rd.field(r, 0);
      if (!id) continue;
      if (id->empty()) {
        rd.error(r, "", "empty scientist id");
        continue;
      }
      if (!data.scientists.emplace(*id, Scientist{*id, {}}).second) {
        rd.error(r, *id, "duplicate scientist id");
        continue;
      }
      source.note(Entity::scientist, *id, r.line);
    }
  }

  if (rd.open(paths.affiliations, {"scientist_id", "year_from", "year_to", "university_id", "sds_id"})) {
    for (const auto& r : rd.rows()) {
      auto sid = rd.field(r, 0);
      auto from = rd.field(r, 1);
      auto to = rd.field(r, 2);
      auto uni = rd.field(r, 3);
      auto sds = rd.field(r, 4);
      if (!sid || !from || !to || !uni || !sds) continue;
      auto y0 = rd.number<int>(r, *from, *sid, "year_from");
      auto y1 = rd.number<int>(r, *to, *sid, "year_to");
      if (!y0 || !y1) continue;
      auto it = data.scientists.find(*sid);
      if (it == data.scientists.end()) {
        rd.error(r, *sid, fmt::format("unknown scientist id '{}'", *sid));
        continue;
      }
      it->second.affiliations.push_back(Affiliation{*y0, *y1, *uni, *sds});
      source.note(Entity::affiliation, *sid, r.line);
    }
  }

  if (rd.open(paths.publications, {"id", "year", "journal_id", "category_ids", "author_ids"})) {
    for (const auto& r : rd.rows()) {
      auto id = rd.field(r, 0);
      auto yr = rd.field(r, 1);
      auto jid = rd.field(r, 2);
      auto cats = rd.field(r, 3);
      auto authors = rd.field(r, 4);
      if (!id || !yr || !jid || !cats || !authors) continue;
      auto year = rd.number<int>(r, *yr, *id, "year");
      if (!year) continue;
      Publication pub{*id, *year, *jid, csv::split_list(*cats), csv::split_list(*authors), {}};
      if (!data.publications.emplace(*id, std::move(pub)).second) {
        rd.error(r, *id, "duplicate publication id");
        continue;
      }
      source.note(Entity::publication, *id, r.line);
    }
  }

  if (rd.open(paths.snapshots, {"publication_id", "observation_date", "citations"})) {
    for (const auto& r : rd.rows()) {
      auto pid = rd.field(r, 0);
      auto dt = rd.field(r, 1);
      auto ct = rd.field(r, 2);
      if (!pid || !dt || !ct) continue;
      auto date = Date::try_parse(*dt);
      if (!date) {
        rd.error(r, *pid, fmt::format("observation_date '{}' is not an ISO date", *dt));
        continue;
      }
      auto count = rd.number<std::int64_t>(r, *ct, *pid, "citations");
      if (!count) continue;
      auto it = data.publications.find(*pid);
      if (it == data.publications.end()) {
        rd.error(r, *pid, fmt::format("unknown publication id '{}'", *pid));
        continue;
      }
      if (!it->second.snapshots.emplace(*date, *count).second) {
        rd.error(r, *pid, fmt::format("duplicate snapshot at {}", date->iso()));
        continue;
      }
      source.note(Entity::snapshot, *pid, r.line);
    }
  }

  auto more = validate(data, &source);
  issues.insert(issues.end(), more.begin(), more.end());
  if (!issues.empty()) throw CorpusError(std::move(issues));
  return Corpus::create(std::move(data));
}

Corpus load_corpus(const fs::path& dir) { return load_corpus(CorpusPaths::in_directory(dir)); }

// ---------------------------------------------------------------------------
// Writing

namespace {

std::string join_ids(const std::vector<Id>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ';';
    out += ids[i];
  }
  return out;
}

class Writer {
 public:
  Writer(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw InputError("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& fields) { out_ << csv::join_row(fields) << '\n'; }

 private:
  std::ofstream out_;
};

}  // namespace

void write_corpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  const auto paths = CorpusPaths::in_directory(dir);
  const auto& org = corpus.structure();

  {
    Writer w(paths.universities, {"id", "name"});
    for (const auto& [id, u] : org.universities) w.row({id, u.name});
  }
  {
    Writer w(paths.structure, {"sds_id", "sds_name", "uda_id", "uda_name"});
    for (const auto& [id, s] : org.sds) w.row({id, s.name, s.uda_id, org.udas.at(s.uda_id).name});
  }
  {
    Writer w(paths.journals, {"id", "name"});
    for (const auto& [id, j] : corpus.journals()) w.row({id, j.name});
  }
  {
    Writer w(paths.impact_factors, {"journal_id", "jcr_edition_year", "category_id", "impact_factor"});
    for (const auto& [id, j] : corpus.journals())
      for (const auto& [key, value] : j.impact_factors)
        w.row({id, fmt::format("{}", key.jcr_edition), key.category_id, fmt::format("{}", value)});
  }
  {
    Writer w(paths.scientists, {"id"});
    for (const auto& [id, s] : corpus.scientists()) w.row({id});
  }
  {
    Writer w(paths.affiliations, {"scientist_id", "year_from", "year_to", "university_id", "sds_id"});
    for (const auto& [id, s] : corpus.scientists())
      for (const auto& a : s.affiliations)
        w.row({id, fmt::format("{}", a.year_from), fmt::format("{}", a.year_to), a.university_id, a.sds_id});
  }
  {
    Writer w(paths.publications, {"id", "year", "journal_id", "category_ids", "author_ids"});
    for (const auto& [id, p] : corpus.publications())
      w.row({id, fmt::format("{}", p.year), p.journal_id, join_ids(p.category_ids), join_ids(p.author_ids)});
  }
  {
    Writer w(paths.snapshots, {"publication_id", "observation_date", "citations"});
    for (const auto& [id, p] : corpus.publications())
      for (const auto& [date, count] : p.snapshots) w.row({id, date.iso(), fmt::format("{}", count)});
  }
}

// ---------------------------------------------------------------------------
// Staff

StaffCount staff_count(const Corpus& corpus, const Id& university_id, const Id& sds_id, YearRange period) {
  if (period.empty()) throw InputError("empty period");
  corpus.university(university_id);
  corpus.sds(sds_id);
  std::int64_t person_years = 0;
  for (const auto& [id, scientist] : corpus.scientists()) {
    for (int y = period.first; y <= period.last; ++y) {
      const auto* a = scientist.affiliation_in(y);
      if (a && a->university_id == university_id && a->sds_id == sds_id) ++person_years;
    }
  }
  return StaffCount{university_id, sds_id, static_cast<double>(person_years) / period.size()};
}

StaffTable staff_table(const Corpus& corpus, YearRange period) {
  if (period.empty()) throw InputError("empty period");
  std::map<std::pair<Id, Id>, std::int64_t> person_years;
  for (const auto& [id, scientist] : corpus.scientists()) {
    for (int y = period.first; y <= period.last; ++y) {
      if (const auto* a = scientist.affiliation_in(y)) ++person_years[{a->university_id, a->sds_id}];
    }
  }
  StaffTable out;
  for (const auto& [key, n] : person_years) out.emplace(key, static_cast<double>(n) / period.size());
  return out;
}

}  // namespace proxyrank
