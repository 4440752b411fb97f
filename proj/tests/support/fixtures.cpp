#include "support/fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "proxyrank/rng.hpp"

namespace proxyrank::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return PROXYRANK_TEST_DATA; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device entropy;
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = fs::temp_directory_path() /
                     ("proxyrank-test-" + std::to_string(entropy()) + "-" + std::to_string(counter++));
    if (fs::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).generic_string()] = slurp(entry.path());
  return files;
}

MiniCorpus& MiniCorpus::university(const Id& id) {
  data_.structure.universities[id] = University{id, "University " + id};
  return *this;
}

MiniCorpus& MiniCorpus::sds(const Id& id, const Id& uda_id) {
  data_.structure.sds[id] = Sds{id, "Sector " + id, uda_id};
  data_.structure.udas.try_emplace(uda_id, Uda{uda_id, "Area " + uda_id});
  return *this;
}

MiniCorpus& MiniCorpus::scientist(const Id& id, const Id& university_id, const Id& sds_id, int year_from,
                                  int year_to) {
  auto& s = data_.scientists[id];
  s.id = id;
  s.affiliations.push_back(Affiliation{year_from, year_to, university_id, sds_id});
  return *this;
}

MiniCorpus& MiniCorpus::journal(const Id& id) {
  auto& j = data_.journals[id];
  j.id = id;
  j.name = "Journal " + id;
  return *this;
}

MiniCorpus& MiniCorpus::impact_factor(const Id& journal_id, int edition, const Id& category_id, double value) {
  journal(journal_id);
  data_.journals[journal_id].impact_factors[ImpactFactorKey{edition, category_id}] = value;
  return *this;
}

MiniCorpus& MiniCorpus::publication(const Id& id, int year, const Id& journal_id, std::vector<Id> categories,
                                    std::vector<Id> authors, std::map<Date, std::int64_t> snapshots) {
  journal(journal_id);
  data_.publications[id] = Publication{id, year, journal_id, std::move(categories), std::move(authors),
                                       std::move(snapshots)};
  return *this;
}

synth::SynthConfig micro_config(std::uint64_t seed) {
  RandomStream shape(seed ^ 0x5eedULL);
  synth::SynthConfig c;
  c.seed = seed;
  c.universities = 2 + static_cast<int>(shape.below(4));
  c.period = YearRange{2004, 2004 + static_cast<int>(shape.below(2))};
  c.snapshot_dates = {Date(2006, 1, 1), Date(2008, 3, 31)};
  c.jcr_editions = {c.period.last};
  c.journals_per_category = 2 + static_cast<int>(shape.below(3));
  c.scientists_per_sds = 1.5;
  c.publications_per_scientist_year = 0.6;
  c.extra_authors = 0.5;
  c.turnover = 0.3;
  c.multi_category_share = 0.4;
  synth::DisciplineProfile p;
  p.uda_id = "MIC";
  p.name = "Micro";
  p.sds_count = 1 + static_cast<int>(shape.below(3));
  p.category_count = 1 + static_cast<int>(shape.below(2));
  c.profiles = {p};
  return c;
}

synth::SynthConfig lag_config(std::uint64_t seed) {
  synth::SynthConfig c;
  c.seed = seed;
  c.universities = 80;
  c.period = YearRange{2004, 2004};
  c.snapshot_dates = {Date(2005, 3, 31), Date(2008, 3, 31)};
  c.jcr_editions = {2004};
  c.scientists_per_sds = 10.0;
  synth::DisciplineProfile fast;
  fast.uda_id = "BIO";
  fast.name = "Biology";
  fast.peak_lag_years = 2.0;
  fast.citation_log_mean = 3.0;
  synth::DisciplineProfile slow = fast;
  slow.uda_id = "MAT";
  slow.name = "Mathematics";
  slow.peak_lag_years = 3.0;
  c.profiles = {fast, slow};
  return c;
}

}  // namespace proxyrank::testing
