#pragma once

#include <cstdint>

namespace germflow {

// Counter-based generator: every (seed, stream) pair owns an independent
// SplitMix64 sequence, so sample i never depends on how many samples were
// drawn before it or on which thread drew it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace germflow
