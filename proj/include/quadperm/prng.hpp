#pragma once
// Counter-based pseudo-randomness: every draw is a pure function of
// (seed, counter), so parallel workers can sample without coordination and
// identical seeds reproduce identical streams on any platform.

#include <cstdint>

namespace quadperm {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless stream: draw(i) does not depend on any other counter value.
struct SplitMix {
  std::uint64_t seed = 0;
  std::uint64_t draw(std::uint64_t counter) const { return mix64(seed ^ mix64(counter)); }
};

// Small stateful convenience for tests.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t s) : state(s) {}
  std::uint64_t next() { return mix64(state++); }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

}  // namespace quadperm
