#include "proxyrank/errors.hpp"

#include <fmt/format.h>

namespace proxyrank {

std::string Issue::to_string() const {
  std::string out = file;
  if (line > 0) out += fmt::format(":{}", line);
  if (!key.empty()) out += fmt::format(" [{}]", key);
  out += ": ";
  out += message;
  return out;
}

namespace {

std::string summarize(const std::vector<Issue>& issues) {
  if (issues.empty()) return "corpus error";
  std::string msg = issues.front().to_string();
  if (issues.size() > 1) msg += fmt::format(" (and {} more)", issues.size() - 1);
  return msg;
}

}  // namespace

CorpusError::CorpusError(std::vector<Issue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message),
      line_(line) {}

}  // namespace proxyrank
