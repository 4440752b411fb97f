#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "proxyrank/ranking.hpp"
#include "proxyrank/temporal.hpp"

namespace proxyrank::report {

enum class Format { tsv, json };

std::string_view to_string(Format format);
Format parse_format(std::string_view text);

// A real number printed with a fixed number of decimals in both encodings.
struct Fixed {
  double value = 0.0;
  int decimals = 6;
};

// Half-away-from-zero rounding at `decimals`, as written in every report.
std::string format_fixed(double value, int decimals);

using Cell = std::variant<std::string, std::int64_t, Fixed, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// TSV: header row, tab-separated, newline-terminated. `preamble` lines are written as `# ...`.
// JSON: array of row objects keyed by column name.
void write(const Table& table, Format format, std::ostream& out, const std::vector<std::string>& preamble = {});
std::string render(const Table& table, Format format, const std::vector<std::string>& preamble = {});

// Shapes of the emitted reports.
Table ranking_table(const std::vector<Ranking>& rankings);
Table exclusion_table(const std::vector<Ranking>& rankings);
Table correlation_table(const std::vector<RankingComparison>& comparisons);  // uda, n, correlation
Table change_table(const std::vector<RankingComparison>& comparisons);       // changed/total, pct, max, mean, median
Table shift_table(const Id& uda_id, const std::vector<ShiftRow>& rows);
Table sweep_table(const SweepReport& sweep);
Table benchmark_table(const BenchmarkReport& report);

// Reads rankings written by ranking_table in either encoding (detected from content).
std::vector<Ranking> read_rankings(const std::filesystem::path& path);
std::vector<Ranking> parse_rankings(std::string_view text);

}  // namespace proxyrank::report
