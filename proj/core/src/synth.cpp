#include "proxyrank/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "proxyrank/rng.hpp"

namespace proxyrank::synth {

// ---------------------------------------------------------------------------
// Configuration

void DisciplineProfile::validate() const {
  auto fail = [&](const std::string& what) { throw ConfigError(0, fmt::format("[uda.{}] {}", uda_id, what)); };
  if (uda_id.empty()) throw ConfigError(0, "UDA section without an id");
  if (sds_count < 1) fail("sds must be >= 1");
  if (category_count < 1) fail("categories must be >= 1");
  if (!(peak_lag_years > 0.0)) fail("peak_lag_years must be > 0");
  if (!(accrual_shape > 1.0)) fail("accrual_shape must be > 1");
  if (!(citation_log_sd >= 0.0)) fail("citation_log_sd must be >= 0");
  if (!(journal_coupling >= 0.0 && journal_coupling <= 1.0)) fail("journal_coupling must lie in [0, 1]");
}

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(0, what); };
  if (universities < 1) fail("universities must be >= 1");
  if (period.empty()) fail("period is empty");
  if (snapshot_dates.empty()) fail("snapshot_dates must list at least one date");
  if (!std::is_sorted(snapshot_dates.begin(), snapshot_dates.end()) ||
      std::adjacent_find(snapshot_dates.begin(), snapshot_dates.end()) != snapshot_dates.end())
    fail("snapshot_dates must be strictly increasing");
  if (jcr_editions.empty()) fail("jcr_editions must list at least one edition");
  if (journals_per_category < 1) fail("journals_per_category must be >= 1");
  if (!(scientists_per_sds > 0.0)) fail("scientists_per_sds must be > 0");
  if (!(publications_per_scientist_year > 0.0)) fail("publications_per_scientist_year must be > 0");
  if (journal_volume < 1) fail("journal_volume must be >= 1");
  if (university_size_spread < 0.0 || output_spread < 0.0) fail("spreads must be >= 0");
  if (std::abs(quality_effect) > 1.0) fail("quality_effect must lie in [-1, 1]");
  if (std::abs(journal_selectivity) > 1.0) fail("journal_selectivity must lie in [-1, 1]");
  if (extra_authors < 0.0) fail("extra_authors must be >= 0");
  if (multi_category_share < 0.0 || multi_category_share > 1.0) fail("multi_category_share must lie in [0, 1]");
  if (turnover < 0.0 || turnover > 1.0) fail("turnover must lie in [0, 1]");
  if (profiles.empty()) fail("at least one [uda.<ID>] section is required");
  std::set<Id> ids;
  for (const auto& p : profiles) {
    p.validate();
    if (!ids.insert(p.uda_id).second) fail(fmt::format("duplicate UDA section '{}'", p.uda_id));
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

template <typename T>
T number(const std::string& text, std::size_t line, const std::string& key) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw ConfigError(line, fmt::format("'{}': '{}' is not a valid number", key, text));
  return v;
}

bool boolean(const std::string& text, std::size_t line, const std::string& key) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError(line, fmt::format("'{}': expected true or false, got '{}'", key, text));
}

std::vector<std::string> list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void set_global(SynthConfig& c, const std::string& key, const std::string& value, std::size_t line) {
  if (key == "seed") c.seed = number<std::uint64_t>(value, line, key);
  else if (key == "universities") c.universities = number<int>(value, line, key);
  else if (key == "period") {
    try {
      c.period = YearRange::parse(value);
    } catch (const InputError& e) {
      throw ConfigError(line, e.what());
    }
  } else if (key == "snapshot_dates") {
    c.snapshot_dates.clear();
    for (const auto& d : list(value)) {
      auto date = Date::try_parse(d);
      if (!date) throw ConfigError(line, fmt::format("'{}': '{}' is not an ISO date", key, d));
      c.snapshot_dates.push_back(*date);
    }
  } else if (key == "jcr_editions") {
    c.jcr_editions.clear();
    for (const auto& e : list(value)) c.jcr_editions.push_back(number<int>(e, line, key));
  } else if (key == "journals_per_category") c.journals_per_category = number<int>(value, line, key);
  else if (key == "scientists_per_sds") c.scientists_per_sds = number<double>(value, line, key);
  else if (key == "university_size_spread") c.university_size_spread = number<double>(value, line, key);
  else if (key == "publications_per_scientist_year") c.publications_per_scientist_year = number<double>(value, line, key);
  else if (key == "output_spread") c.output_spread = number<double>(value, line, key);
  else if (key == "quality_effect") c.quality_effect = number<double>(value, line, key);
  else if (key == "journal_selectivity") c.journal_selectivity = number<double>(value, line, key);
  else if (key == "extra_authors") c.extra_authors = number<double>(value, line, key);
  else if (key == "multi_category_share") c.multi_category_share = number<double>(value, line, key);
  else if (key == "journal_volume") c.journal_volume = number<int>(value, line, key);
  else if (key == "turnover") c.turnover = number<double>(value, line, key);
  else if (key == "timing_noise") c.timing_noise = boolean(value, line, key);
  else throw ConfigError(line, fmt::format("unknown key '{}'", key));
}

void set_profile(DisciplineProfile& p, const std::string& key, const std::string& value, std::size_t line) {
  if (key == "name") p.name = value;
  else if (key == "sds") p.sds_count = number<int>(value, line, key);
  else if (key == "categories") p.category_count = number<int>(value, line, key);
  else if (key == "peak_lag_years") p.peak_lag_years = number<double>(value, line, key);
  else if (key == "accrual_shape") p.accrual_shape = number<double>(value, line, key);
  else if (key == "citation_log_mean") p.citation_log_mean = number<double>(value, line, key);
  else if (key == "citation_log_sd") p.citation_log_sd = number<double>(value, line, key);
  else if (key == "journal_coupling") p.journal_coupling = number<double>(value, line, key);
  else throw ConfigError(line, fmt::format("unknown key '{}' in [uda.{}]", key, p.uda_id));
}

}  // namespace

SynthConfig parse_config(std::string_view text) {
  SynthConfig c;
  std::set<std::string> seen;
  DisciplineProfile* section = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      const auto name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!name.starts_with("uda.") || name.size() == 4)
        throw ConfigError(line_no, fmt::format("unknown section '{}' (expected [uda.<ID>])", name));
      const Id id = name.substr(4);
      for (const auto& p : c.profiles)
        if (p.uda_id == id) throw ConfigError(line_no, fmt::format("duplicate section [uda.{}]", id));
      c.profiles.push_back(DisciplineProfile{});
      section = &c.profiles.back();
      section->uda_id = id;
      section->name = id;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    const auto scoped = section ? section->uda_id + "." + key : key;
    if (!seen.insert(scoped).second) throw ConfigError(line_no, fmt::format("duplicate key '{}'", key));
    if (section)
      set_profile(*section, key, value, line_no);
    else
      set_global(c, key, value, line_no);
  }
  if (!seen.contains("seed")) throw ConfigError(0, "missing required key 'seed'");
  if (!seen.contains("snapshot_dates")) throw ConfigError(0, "missing required key 'snapshot_dates'");
  if (!seen.contains("jcr_editions")) throw ConfigError(0, "missing required key 'jcr_editions'");
  std::sort(c.profiles.begin(), c.profiles.end(),
            [](const DisciplineProfile& a, const DisciplineProfile& b) { return a.uda_id < b.uda_id; });
  c.validate();
  return c;
}

SynthConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string SynthConfig::to_text() const {
  std::string out;
  auto kv = [&](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
  kv("seed", seed);
  kv("universities", universities);
  kv("period", period.to_string());
  std::string dates;
  for (std::size_t i = 0; i < snapshot_dates.size(); ++i) dates += (i ? ", " : "") + snapshot_dates[i].iso();
  kv("snapshot_dates", dates);
  std::string editions;
  for (std::size_t i = 0; i < jcr_editions.size(); ++i) editions += fmt::format("{}{}", i ? ", " : "", jcr_editions[i]);
  kv("jcr_editions", editions);
  kv("journals_per_category", journals_per_category);
  kv("scientists_per_sds", scientists_per_sds);
  kv("university_size_spread", university_size_spread);
  kv("publications_per_scientist_year", publications_per_scientist_year);
  kv("output_spread", output_spread);
  kv("quality_effect", quality_effect);
  kv("journal_selectivity", journal_selectivity);
  kv("extra_authors", extra_authors);
  kv("multi_category_share", multi_category_share);
  kv("journal_volume", journal_volume);
  kv("turnover", turnover);
  kv("timing_noise", timing_noise ? "true" : "false");
  for (const auto& p : profiles) {
    out += fmt::format("\n[uda.{}]\n", p.uda_id);
    kv("name", fmt::format("\"{}\"", p.name));
    kv("sds", p.sds_count);
    kv("categories", p.category_count);
    kv("peak_lag_years", p.peak_lag_years);
    kv("accrual_shape", p.accrual_shape);
    kv("citation_log_mean", p.citation_log_mean);
    kv("citation_log_sd", p.citation_log_sd);
    kv("journal_coupling", p.journal_coupling);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Citation life cycle

double accrual_fraction(const DisciplineProfile& profile, double lag_years) {
  if (lag_years < 0.0 || std::isnan(lag_years)) throw InputError(fmt::format("negative lag {}", lag_years));
  if (lag_years == 0.0) return 0.0;
  // Gamma(k, theta) has its mode at (k - 1) * theta.
  const double theta = profile.peak_lag_years / (profile.accrual_shape - 1.0);
  return boost::math::gamma_p(profile.accrual_shape, lag_years / theta);
}

// ---------------------------------------------------------------------------
// Generation

namespace {

constexpr double kMaxLifetimeCitations = 100000.0;

struct UniversityLatent {
  Id id;
  double quality = 0.0;
  double size = 1.0;
  double output = 1.0;
};

struct CategoryInfo {
  Id id;
  const DisciplineProfile* profile = nullptr;
  double log_mean = 0.0;
  std::vector<Id> journals;  // journals listing this category, ascending quality
};

struct JournalLatent {
  Id id;
  Id primary_category;
  std::vector<Id> categories;
  double quality = 0.0;
};

double lognormal_factor(RandomStream& rng, double spread) {
  return std::exp(spread * rng.normal() - 0.5 * spread * spread);
}

double normal_cdf(double z) {
  // Standard normal CDF; maps a latent score to a quantile in (0, 1).
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double lifetime_citations(const DisciplineProfile& p, double log_mean, double journal_quality, double article_noise) {
  const double c = p.journal_coupling;
  const double z = log_mean + p.citation_log_sd * (std::sqrt(c) * journal_quality + std::sqrt(1.0 - c) * article_noise);
  return std::min(std::round(std::exp(z)), kMaxLifetimeCitations);
}

// Publication instant in days since epoch (fractional).
double publication_instant(RandomStream& rng, int year, bool timing_noise) {
  const double start = static_cast<double>(Date(year, 1, 1).days());
  const double length = static_cast<double>(Date(year + 1, 1, 1).days()) - start;
  return start + (timing_noise ? rng.uniform() * length : 0.5 * length);
}

double lag_years(double published, Date at) {
  return std::max(0.0, (static_cast<double>(at.days()) - published) / 365.25);
}

// Citation arrivals of one article. With timing noise each citation arrives at an independent
// gamma-distributed lag (represented by its CDF position); otherwise counts follow the curve exactly.
class Arrivals {
 public:
  Arrivals(RandomStream& rng, double lifetime, bool noisy) : lifetime_(lifetime), noisy_(noisy) {
    if (noisy_) {
      positions_.reserve(static_cast<std::size_t>(lifetime));
      for (int i = 0; i < static_cast<int>(lifetime); ++i) positions_.push_back(rng.uniform());
      std::sort(positions_.begin(), positions_.end());
    }
  }

  // Cumulative count once `fraction` of the lifetime total is due.
  std::int64_t count(double fraction) const {
    if (!noisy_) return static_cast<std::int64_t>(std::floor(lifetime_ * fraction));
    return std::lower_bound(positions_.begin(), positions_.end(), fraction) - positions_.begin();
  }

 private:
  double lifetime_;
  bool noisy_;
  std::vector<double> positions_;
};

}  // namespace

Corpus generate(const SynthConfig& config) {
  config.validate();
  const RandomStream root(config.seed);
  CorpusData data;
  auto& org = data.structure;

  // Universities.
  std::vector<UniversityLatent> universities;
  for (int i = 0; i < config.universities; ++i) {
    auto rng = root.split("university").split(static_cast<std::uint64_t>(i));
    UniversityLatent u;
    u.id = fmt::format("U{:03}", i + 1);
    u.quality = rng.normal();
    u.size = lognormal_factor(rng, config.university_size_spread);
    u.output = lognormal_factor(rng, config.output_spread);
    org.universities.emplace(u.id, University{u.id, fmt::format("University {:03}", i + 1)});
    universities.push_back(u);
  }

  // Structure, categories and journals.
  std::map<Id, CategoryInfo> categories;
  std::map<Id, JournalLatent> journals;
  std::map<Id, Id> sds_category;  // primary category of each SDS
  for (const auto& p : config.profiles) {
    org.udas.emplace(p.uda_id, Uda{p.uda_id, p.name});
    std::vector<Id> cats;
    for (int k = 0; k < p.category_count; ++k) {
      const Id cat = fmt::format("{}-C{:02}", p.uda_id, k + 1);
      auto rng = root.split("category").split(cat);
      categories.emplace(cat, CategoryInfo{cat, &p, p.citation_log_mean + 0.25 * rng.normal(), {}});
      cats.push_back(cat);
    }
    for (int k = 0; k < p.sds_count; ++k) {
      const Id sds = fmt::format("{}-S{:02}", p.uda_id, k + 1);
      org.sds.emplace(sds, Sds{sds, fmt::format("{} sector {}", p.name, k + 1), p.uda_id});
      sds_category.emplace(sds, cats[static_cast<std::size_t>(k) % cats.size()]);
    }
    for (const auto& cat : cats) {
      for (int j = 0; j < config.journals_per_category; ++j) {
        const Id jid = fmt::format("{}-J{:02}", cat, j + 1);
        auto rng = root.split("journal").split(jid);
        JournalLatent jl{jid, cat, {cat}, rng.normal()};
        if (cats.size() > 1 && rng.bernoulli(config.multi_category_share)) {
          auto other = cats[rng.below(cats.size() - 1)];
          if (other == cat) other = cats.back();
          jl.categories.push_back(other);
          std::sort(jl.categories.begin(), jl.categories.end());
        }
        journals.emplace(jid, std::move(jl));
      }
    }
  }
  for (const auto& [jid, jl] : journals)
    for (const auto& cat : jl.categories) categories.at(cat).journals.push_back(jid);
  for (auto& [cat, info] : categories)
    std::stable_sort(info.journals.begin(), info.journals.end(),
                     [&](const Id& a, const Id& b) { return journals.at(a).quality < journals.at(b).quality; });

  // Impact factors: citations received in the edition year by the journal's articles of the
  // two preceding years, per article.
  for (const auto& [jid, jl] : journals) {
    const auto& primary = categories.at(jl.primary_category);
    const auto& profile = *primary.profile;
    Journal journal{jid, fmt::format("Journal {}", jid), {}};
    for (int edition : config.jcr_editions) {
      auto rng = root.split("impact").split(jid).split(static_cast<std::uint64_t>(edition));
      const Date window_start(edition, 1, 1);
      const Date window_end(edition + 1, 1, 1);
      double received = 0.0;
      int items = 0;
      for (int year = edition - 2; year <= edition - 1; ++year) {
        for (int a = 0; a < config.journal_volume; ++a) {
          const double lifetime = lifetime_citations(profile, primary.log_mean, jl.quality, rng.normal());
          const double published = publication_instant(rng, year, config.timing_noise);
          const Arrivals arrivals(rng, lifetime, config.timing_noise);
          received += static_cast<double>(
              arrivals.count(accrual_fraction(profile, lag_years(published, window_end))) -
              arrivals.count(accrual_fraction(profile, lag_years(published, window_start))));
          ++items;
        }
      }
      const double impact = std::round(1000.0 * received / items) / 1000.0;
      for (const auto& cat : jl.categories) journal.impact_factors.emplace(ImpactFactorKey{edition, cat}, impact);
    }
    data.journals.emplace(jid, std::move(journal));
  }

  // Staff.
  struct Member {
    Id scientist;
    const UniversityLatent* university;
    Id sds;
  };
  std::vector<Member> members;
  int next_scientist = 1;
  for (const auto& u : universities) {
    for (const auto& [sds_id, sds] : org.sds) {
      auto rng = root.split("staff").split(u.id).split(sds_id);
      const auto head_count = rng.poisson(config.scientists_per_sds * u.size);
      for (std::int64_t k = 0; k < head_count; ++k) {
        const Id sid = fmt::format("R{:06}", next_scientist++);
        Affiliation a{config.period.first, config.period.last, u.id, sds_id};
        if (config.period.size() > 1 && rng.bernoulli(config.turnover)) {
          const int cut = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.period.size() - 1)));
          if (rng.bernoulli(0.5))
            a.year_from = config.period.first + 1 + cut;
          else
            a.year_to = config.period.first + cut;
        }
        data.scientists.emplace(sid, Scientist{sid, {a}});
        members.push_back({sid, &u, sds_id});
      }
    }
  }

  std::map<int, std::vector<Id>> active_by_year;
  for (const auto& m : members)
    for (int y = config.period.first; y <= config.period.last; ++y)
      if (data.scientists.at(m.scientist).affiliation_in(y)) active_by_year[y].push_back(m.scientist);

  // Publications.
  int next_publication = 1;
  const double selectivity = config.journal_selectivity;
  const double quality_effect = config.quality_effect;
  for (const auto& m : members) {
    auto rng = root.split("publications").split(m.scientist);
    const auto& info = categories.at(sds_category.at(m.sds));
    const auto& profile = *info.profile;
    const auto& aff = data.scientists.at(m.scientist).affiliations.front();
    for (int year = aff.year_from; year <= aff.year_to; ++year) {
      const auto count = rng.poisson(config.publications_per_scientist_year * m.university->output);
      for (std::int64_t k = 0; k < count; ++k) {
        const double choice = selectivity * m.university->quality + std::sqrt(1.0 - selectivity * selectivity) * rng.normal();
        auto index = static_cast<std::size_t>(normal_cdf(choice) * info.journals.size());
        index = std::min(index, info.journals.size() - 1);
        const auto& journal = journals.at(info.journals[index]);

        const double noise = quality_effect * m.university->quality +
                             std::sqrt(1.0 - quality_effect * quality_effect) * rng.normal();
        const double lifetime = lifetime_citations(profile, categories.at(journal.primary_category).log_mean,
                                                   journal.quality, noise);
        const double published = publication_instant(rng, year, config.timing_noise);
        const Arrivals arrivals(rng, lifetime, config.timing_noise);

        Publication pub;
        pub.id = fmt::format("P{:07}", next_publication++);
        pub.year = year;
        pub.journal_id = journal.id;
        pub.category_ids = journal.categories;
        std::set<Id> authors{m.scientist};
        const auto extra = rng.poisson(config.extra_authors);
        const auto& pool = active_by_year[year];
        for (std::int64_t e = 0; e < extra && !pool.empty(); ++e) authors.insert(pool[rng.below(pool.size())]);
        pub.author_ids.assign(authors.begin(), authors.end());
        const Date earliest(year, 1, 1);
        for (const auto& d : config.snapshot_dates) {
          if (d < earliest) continue;
          pub.snapshots.emplace(d, arrivals.count(accrual_fraction(profile, lag_years(published, d))));
        }
        data.publications.emplace(pub.id, std::move(pub));
      }
    }
  }
  return Corpus::create(std::move(data));
}

void generate_files(const SynthConfig& config, const std::filesystem::path& dir) {
  write_corpus(generate(config), dir);
}

}  // namespace proxyrank::synth
