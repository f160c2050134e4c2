#pragma once

// Reproducible random streams for the Monte Carlo harness.
//
// Every (master seed, repetition, sample) triple maps to its own generator
// state through a SplitMix64 hash, so a repetition's draws do not depend on
// which thread runs it or on how many repetitions came before.
//
// Generator: xoshiro256++. Uniforms use the top 53 bits. Normal variates use
// the Marsaglia polar method, caching the second variate of each pair. These
// choices are part of the reproducibility contract and fixed per release.

#include <array>
#include <cstdint>
#include <limits>

namespace mixtest {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

class Xoshiro256pp {
public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept;

private:
  std::array<std::uint64_t, 4> s_;
};

class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) noexcept : gen_(seed) {}

  // Substream for one sample of one repetition.
  static RandomStream substream(std::uint64_t master_seed,
                                std::uint64_t repetition,
                                std::uint64_t sample) noexcept;

  std::uint64_t next_u64() noexcept { return gen_(); }

  // Uniform on [0, 1).
  double uniform() noexcept;

  // Standard normal.
  double normal() noexcept;

private:
  Xoshiro256pp gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace mixtest
