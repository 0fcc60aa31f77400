#pragma once

#include <cstdint>
#include <random>

namespace rotkit {

// Deterministic helpers over std::mt19937_64. The raw engine sequence is
// pinned by the standard; std::uniform_int_distribution is not, so reductions
// are done by hand to keep seeded output portable.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  long uniform(long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rotkit
