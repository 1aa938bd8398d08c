#pragma once

#include <cstdint>
#include <cmath>

namespace ccfair {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based draw: the triple (seed, stream, counter) fully determines the
// value, so any slot of any stream can be regenerated without history.
inline uint64_t counter_bits(uint64_t seed, uint64_t stream, uint64_t counter) {
  return mix64(counter ^ mix64(stream ^ mix64(seed)));
}

// Uniform on (0, 1].
inline double counter_u01(uint64_t seed, uint64_t stream, uint64_t counter) {
  return static_cast<double>((counter_bits(seed, stream, counter) >> 11) + 1) * 0x1.0p-53;
}

// Exponential with the given mean.
inline double counter_exponential(double mean, uint64_t seed, uint64_t stream, uint64_t counter) {
  return -mean * std::log(counter_u01(seed, stream, counter));
}

}  // namespace ccfair
