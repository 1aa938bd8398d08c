#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace ccfair {

// Subset enumeration is 2^K and routing scans all (J, I subset of J) pairs,
// so K is capped where a slot still runs in tens of milliseconds.
inline constexpr int kMaxUsers = 16;

// A nonempty user subset encoded as a bitmask: bit k set <=> user k belongs.
using SubsetId = uint32_t;

inline int subset_size(SubsetId mask) { return std::popcount(mask); }

struct CacheParams {
  int users = 0;                // K
  double memory_fraction = 0.0; // m = M/N in [0, 1]
  double file_size_bits = 0.0;  // F
};

void validate(const CacheParams& params);

// Bits of one sub-file cached by exactly `cached_by` users out of K.
double subfile_size_bits(int cached_by, const CacheParams& params);

// Aggregate bits entering the codeword queue of a receiver set of size
// `receivers` when one demand set of size `combined` is encoded (sub-files
// additionally cached outside the demand set are folded in).
double codeword_bits(int combined, int receivers, const CacheParams& params);

// Multicast load (files worth of channel work) of the standard scheme to
// satisfy one demand per user.
double standard_cc_load_files(int users, double memory_fraction);

// All nonempty subsets in ascending mask order; length 2^K - 1.
std::vector<SubsetId> enumerate_subsets(int users);

// In-place subset-sum (zeta) transform: values[mask] <- sum over submasks.
// `values` must have size 2^users.
void subset_zeta_inplace(std::span<double> values, int users);

}  // namespace ccfair
