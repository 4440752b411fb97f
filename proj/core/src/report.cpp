#include "proxyrank/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "proxyrank/csv.hpp"

namespace proxyrank::report {

using json = nlohmann::ordered_json;

std::string_view to_string(Format format) { return format == Format::tsv ? "tsv" : "json"; }

Format parse_format(std::string_view text) {
  if (text == "tsv") return Format::tsv;
  if (text == "json") return Format::json;
  throw InputError(fmt::format("unknown format '{}' (expected tsv or json)", text));
}

namespace {

double rounded(const Fixed& f) {
  const double scale = std::pow(10.0, f.decimals);
  const double r = std::round(f.value * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

std::string tsv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          std::string s = v;
          for (auto& c : s)
            if (c == '\t' || c == '\n' || c == '\r') c = ' ';
          return s;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return fmt::format("{}", v);
        } else if constexpr (std::is_same_v<T, Fixed>) {
          return format_fixed(v.value, v.decimals);
        } else {
          return v ? "true" : "false";
        }
      },
      cell);
}

json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Fixed>)
          return rounded(v);
        else
          return v;
      },
      cell);
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  return fmt::format("{:.{}f}", rounded(Fixed{value, decimals}), decimals);
}

void write(const Table& table, Format format, std::ostream& out, const std::vector<std::string>& preamble) {
  if (format == Format::tsv) {
    for (const auto& line : preamble) out << "# " << line << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "\t" : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << tsv_cell(row[i]);
      out << '\n';
    }
    return;
  }
  json arr = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

std::string render(const Table& table, Format format, const std::vector<std::string>& preamble) {
  std::ostringstream out;
  write(table, format, out, preamble);
  return out.str();
}

namespace {

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }
std::int64_t as_int(int v) { return v; }

}  // namespace

Table ranking_table(const std::vector<Ranking>& rankings) {
  Table t{{"uda_id", "uda_name", "proxy", "university_id", "university_name", "staff", "value", "rank", "tie"}, {}};
  for (const auto& r : rankings)
    for (const auto& e : r.entries)
      t.rows.push_back({r.uda_id, r.uda_name, std::string(to_string(r.proxy)), e.university_id, e.name,
                        Fixed{e.staff, 6}, Fixed{e.value, 6}, as_int(e.rank), e.tied});
  return t;
}

Table exclusion_table(const std::vector<Ranking>& rankings) {
  Table t{{"uda_id", "proxy", "university_id", "university_name", "staff", "reason"}, {}};
  for (const auto& r : rankings)
    for (const auto& x : r.excluded)
      t.rows.push_back({r.uda_id, std::string(to_string(r.proxy)), x.university_id, x.name, Fixed{x.staff, 6}, x.reason});
  return t;
}

Table correlation_table(const std::vector<RankingComparison>& comparisons) {
  Table t{{"uda_id", "uda_name", "n_universities", "correlation"}, {}};
  for (const auto& c : comparisons)
    t.rows.push_back({c.uda_id, c.uda_name, as_int(c.n_universities), Fixed{c.correlation, 3}});
  return t;
}

Table change_table(const std::vector<RankingComparison>& comparisons) {
  Table t{{"uda_id", "uda_name", "changed", "total", "pct_changed", "max_shift", "mean_shift", "median_shift"}, {}};
  for (const auto& c : comparisons)
    t.rows.push_back({c.uda_id, c.uda_name, as_int(c.changed), as_int(c.n_universities), Fixed{c.pct_changed, 1},
                      as_int(c.max_shift), Fixed{c.mean_shift, 1}, Fixed{c.median_shift, 1}});
  return t;
}

Table shift_table(const Id& uda_id, const std::vector<ShiftRow>& rows) {
  Table t{{"uda_id", "university_id", "university_name", "staff", "rank_a", "rank_b", "variation"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({uda_id, r.university_id, r.name, Fixed{r.staff, 6}, as_int(r.rank_a), as_int(r.rank_b),
                      as_int(r.variation)});
  return t;
}

namespace {

void append_stats(std::vector<Cell>& row, const RankingComparison& c) {
  row.insert(row.end(), {Fixed{c.pct_changed, 1}, as_int(c.max_shift), Fixed{c.mean_shift, 1},
                         Fixed{c.median_shift, 1}, Fixed{c.correlation, 3}});
}

}  // namespace

Table sweep_table(const SweepReport& sweep) {
  Table t{{"observation_date", "jcr_edition", "uda_id", "uda_name", "n_universities", "pct_changed", "max_shift",
           "mean_shift", "median_shift", "correlation"},
          {}};
  for (const auto& r : sweep.rows) {
    std::vector<Cell> row{r.date.iso(), as_int(sweep.jcr_edition), r.stats.uda_id, r.stats.uda_name,
                          as_int(r.stats.n_universities)};
    append_stats(row, r.stats);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table benchmark_table(const BenchmarkReport& report) {
  Table t{{"uda_id", "uda_name", "n_universities", "citations_pct_changed", "citations_max_shift",
           "citations_mean_shift", "citations_median_shift", "citations_correlation", "if_pct_changed",
           "if_max_shift", "if_mean_shift", "if_median_shift", "if_correlation"},
          {}};
  for (const auto& c : report.comparisons) {
    std::vector<Cell> row{c.uda_id, c.uda_name, as_int(c.citations_early.n_universities)};
    append_stats(row, c.citations_early);
    append_stats(row, c.impact_factor);
    t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

struct RawEntry {
  Id uda_id;
  std::string uda_name;
  std::string proxy;
  RankedUniversity entry;
};

template <typename T>
T parse_num(const std::string& text, const char* what) {
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    throw InputError(fmt::format("ranking file: {} '{}' is not a number", what, text));
  return v;
}

std::vector<Ranking> group(std::vector<RawEntry> raw) {
  std::map<Id, Ranking> by_uda;
  for (auto& r : raw) {
    auto& ranking = by_uda[r.uda_id];
    ranking.uda_id = r.uda_id;
    ranking.uda_name = r.uda_name;
    ranking.proxy = parse_proxy(r.proxy);
    ranking.entries.push_back(std::move(r.entry));
  }
  std::vector<Ranking> out;
  for (auto& [id, ranking] : by_uda) {
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const RankedUniversity& a, const RankedUniversity& b) { return a.rank < b.rank; });
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
      if (ranking.entries[i].rank != static_cast<int>(i) + 1)
        throw InputError(fmt::format("ranking file: UDA '{}' ranks are not a permutation of 1..{}", id,
                                     ranking.entries.size()));
    }
    out.push_back(std::move(ranking));
  }
  return out;
}

std::vector<Ranking> parse_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(fmt::format("ranking file: invalid JSON: {}", e.what()));
  }
  if (!doc.is_array()) throw InputError("ranking file: expected a JSON array of rows");
  std::vector<RawEntry> raw;
  try {
    for (const auto& row : doc) {
      RawEntry r;
      r.uda_id = row.at("uda_id").get<std::string>();
      r.uda_name = row.value("uda_name", "");
      r.proxy = row.value("proxy", "citations");
      r.entry.university_id = row.at("university_id").get<std::string>();
      r.entry.name = row.value("university_name", r.entry.university_id);
      r.entry.staff = row.value("staff", 0.0);
      r.entry.value = row.value("value", 0.0);
      r.entry.rank = row.at("rank").get<int>();
      r.entry.tied = row.value("tie", false);
      raw.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InputError(fmt::format("ranking file: {}", e.what()));
  }
  return group(std::move(raw));
}

std::vector<Ranking> parse_tsv(std::string_view text) {
  const auto table = csv::Table::parse(text, '\t');
  auto col = [&](const char* name) {
    auto c = table.column(name);
    if (!c) throw InputError(fmt::format("ranking file: missing column '{}'", name));
    return *c;
  };
  const auto uda = col("uda_id");
  const auto uni = col("university_id");
  const auto rank = col("rank");
  const auto uda_name = table.column("uda_name");
  const auto proxy = table.column("proxy");
  const auto name = table.column("university_name");
  const auto staff = table.column("staff");
  const auto value = table.column("value");
  const auto tie = table.column("tie");
  std::vector<RawEntry> raw;
  for (const auto& row : table.rows()) {
    const auto& f = row.fields;
    auto get = [&](std::optional<std::size_t> c, std::string fallback) {
      return c && *c < f.size() ? f[*c] : fallback;
    };
    if (std::max({uda, uni, rank}) >= f.size())
      throw InputError(fmt::format("ranking file: line {} has too few fields", row.line));
    RawEntry r;
    r.uda_id = f[uda];
    r.uda_name = get(uda_name, "");
    r.proxy = get(proxy, "citations");
    r.entry.university_id = f[uni];
    r.entry.name = get(name, f[uni]);
    r.entry.staff = parse_num<double>(get(staff, "0"), "staff");
    r.entry.value = parse_num<double>(get(value, "0"), "value");
    r.entry.rank = parse_num<int>(f[rank], "rank");
    r.entry.tied = get(tie, "false") == "true";
    raw.push_back(std::move(r));
  }
  return group(std::move(raw));
}

}  // namespace

std::vector<Ranking> parse_rankings(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') return parse_json(text);
  return parse_tsv(text);
}

std::vector<Ranking> read_rankings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rankings(buf.str());
}

}  // namespace proxyrank::report
