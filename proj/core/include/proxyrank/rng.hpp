#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace proxyrank {

// Reproducible random stream. Children derived with split() are independent of how much
// the parent has been consumed, so generation order inside one stream never leaks into another.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream split(std::string_view label) const;
  RandomStream split(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next() { return engine_(); }
  double uniform();                        // [0, 1), 53-bit resolution
  double normal();                         // standard normal
  std::uint64_t below(std::uint64_t n);    // uniform on [0, n)
  std::int64_t poisson(double mean);
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace proxyrank
