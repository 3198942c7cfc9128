#pragma once

// Portable random streams: std::mt19937_64 (fully specified by the
// standard) with hand-written distributions, since the std:: distributions
// are implementation-defined. Seeds for sub-streams come from splitmix64.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace msp {

std::uint64_t splitmix64(std::uint64_t x);

// Mixes a master seed with any number of indices (cell, repeat, ...).
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> parts);

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // uniform over [lo, hi], unbiased
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // uniform over [lo, hi) with 53 random bits
  double uniform_real(double lo, double hi);

private:
  std::mt19937_64 engine_;
};

}  // namespace msp
