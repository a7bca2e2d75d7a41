#pragma once

#include <cstdint>

namespace distlab {

// 64-bit linear congruential generator (Knuth's MMIX constants); each draw
// returns the high 31 bits of the new state.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}
  std::uint32_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<std::uint32_t>(state_ >> 33);
  }
  // Uniform-ish draw in [0, bound) by reduction modulo bound.
  std::uint32_t below(std::uint32_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

}  // namespace distlab
