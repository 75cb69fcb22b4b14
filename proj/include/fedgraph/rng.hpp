#pragma once

#include <cstdint>
#include <string_view>

namespace fedgraph::rng {

// Counter-based generator: every draw is a pure function of (key, counter),
// so parallel evaluation order cannot change any stream. Keys are derived by
// chaining the global seed with entity tags (client id, tensor name, round).

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline uint64_t chain(uint64_t key, uint64_t v) {
  return mix64(key + 0x9e3779b97f4a7c15ULL * (v + 1));
}

inline uint64_t chain(uint64_t key, std::string_view tag) {
  uint64_t k = key;
  for (unsigned char ch : tag) k = mix64(k ^ ch);
  return k;
}

inline uint64_t bits(uint64_t key, uint64_t counter) {
  return mix64(mix64(key + 0x9e3779b97f4a7c15ULL * (counter + 1)));
}

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform(uint64_t key, uint64_t counter) {
  return static_cast<double>(bits(key, counter) >> 11) * 0x1.0p-53;
}

/// Uniform draw in [-a, a).
inline double uniform_sym(uint64_t key, uint64_t counter, double a) {
  return (2.0 * uniform(key, counter) - 1.0) * a;
}

/// Standard normal via Box-Muller; consumes counters 2k and 2k+1.
double normal(uint64_t key, uint64_t counter);

}  // namespace fedgraph::rng
