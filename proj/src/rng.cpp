#include "mixtest/rng.hpp"

#include <bit>
#include <cmath>

namespace mixtest {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) noexcept {
  for (auto& word : s_)
    word = splitmix64(seed);
}

Xoshiro256pp::result_type Xoshiro256pp::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

RandomStream RandomStream::substream(std::uint64_t master_seed,
                                     std::uint64_t repetition,
                                     std::uint64_t sample) noexcept {
  std::uint64_t h = master_seed;
  std::uint64_t key = splitmix64(h);
  h = key ^ repetition;
  key = splitmix64(h);
  h = key ^ sample;
  return RandomStream(splitmix64(h));
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

} // namespace mixtest
