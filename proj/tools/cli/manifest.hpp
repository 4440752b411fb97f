#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace proxyrank::cli {

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_text(const std::string& text);

// Provenance record written next to every set of reports.
//
// The digest covers the command, the resolved configuration, the input file names and
// contents, and the tool version. It leaves out the timestamp and output locations, so two
// runs over the same inputs produce the same digest (and byte-identical reports).
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;

  std::string digest() const;
  // Timestamp honours SOURCE_DATE_EPOCH when set.
  void write(const std::filesystem::path& path) const;
};

std::string tool_version();

}  // namespace proxyrank::cli
