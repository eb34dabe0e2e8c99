#pragma once

#include <cstdint>
#include <initializer_list>

namespace graphnorm {

// SplitMix64 finalizer. Used both as a stateless mixer for counter-based
// draws and as the step function of SplitMix64Stream.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derived seed for a counter path, e.g. derive_seed(seed, {trial, 2}).
// Every path gives an independent-looking 64-bit key, and the result does
// not depend on the order in which paths are visited.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  for (std::uint64_t c : path) h = mix64(h ^ mix64(c + 0x3c6ef372fe94f82bULL));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Tiny sequential stream; bit-exact across platforms, unlike the standard
// distributions.
class SplitMix64Stream {
 public:
  explicit SplitMix64Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return to_unit(next()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>((next() >> 11) % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

}  // namespace graphnorm
