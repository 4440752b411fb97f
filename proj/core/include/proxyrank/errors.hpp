#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxyrank {

// One problem found while ingesting a corpus file.
struct Issue {
  std::string file;
  std::size_t line = 0;  // 0 when the problem is not tied to a line
  std::string key;
  std::string message;

  std::string to_string() const;
};

// Thrown by the loader with every issue found; no partial corpus escapes.
class CorpusError : public std::runtime_error {
 public:
  explicit CorpusError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

// Bad argument to an operation: unknown id, empty cohort, zero staff, ...
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The corpus does not carry the data an exercise asks for (snapshot, JCR edition).
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed synthesis configuration. line() is 0 for missing keys.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace proxyrank
