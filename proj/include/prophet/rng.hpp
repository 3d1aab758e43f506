#pragma once

#include <cstdint>

namespace prophet {

// Counter-based RNG: every (seed, run, substream) triple yields an
// independent deterministic stream, so Monte Carlo estimates do not depend
// on scheduling or chunking.
class RunRng {
 public:
  RunRng(std::uint64_t seed, std::uint64_t run, std::uint64_t substream = 0) {
    state_ = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(run + 0x7f4a7c159e3779b9ULL) ^
                 mix(substream + 0xd1b54a32d192ed03ULL));
    if (state_ == 0) state_ = 0x2545f4914f6cdd1dULL;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1], safe as an argument to log().
  double next_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }

  std::uint64_t state_;
};

}  // namespace prophet
