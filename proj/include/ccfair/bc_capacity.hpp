#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccfair/subsets.hpp"

namespace ccfair {

struct ChannelState {
  std::vector<double> gains;  // h_k >= 0, one per user
};

// Reduction of the 2^K-1 subset weights to one weight per decoding layer.
// Positions index users sorted by decreasing gain (ties by user index).
struct ReducedWeights {
  std::vector<int> order;            // order[i] = user at position i
  std::vector<double> weight;        // largest admissible subset weight per position
  std::vector<SubsetId> best_subset; // subset attaining it (largest cardinality,
                                     // then smallest mask, among maximizers)
};

struct SubsetRate {
  SubsetId mask = 0;
  double bits_per_use = 0.0;
};

// Half-open interval of interference levels won by one position on the upper
// envelope of the rate-utility curves weight/(1/h + z).
struct PowerSegment {
  int position = 0;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

struct RateAllocation {
  std::vector<int> order;          // strength order used for the power levels
  std::vector<double> power;       // per position, sums to the budget when any weight > 0
  std::vector<SubsetRate> rates;   // nonzero multicast rates, at most K entries
  double weighted_sum = 0.0;       // achieved weighted sum rate
};

// subset_weights is mask-indexed with size 2^K (entry 0 ignored), entries
// nonnegative and finite.
ReducedWeights reduce_weights(std::span<const double> subset_weights, const ChannelState& channel);

// Upper-envelope sweep over z in [0, power_budget]. Crossings between the
// hyperbolas weight/(1/h + z) are solved in closed form; each position wins a
// single contiguous interval.
std::vector<PowerSegment> power_segments(const ReducedWeights& reduced,
                                         const ChannelState& channel,
                                         double power_budget);

// Per-position power: the measure of the envelope interval each position wins.
// All-zero weights yield the zero vector.
std::vector<double> allocate_power(const ReducedWeights& reduced,
                                   const ChannelState& channel,
                                   double power_budget);

// Layer rates log2((1 + h_k C_k) / (1 + h_k C_{k-1})) with C_k the cumulative
// power of positions up to k; gains must be given in decreasing order.
std::vector<double> rates_from_power(std::span<const double> power_by_position,
                                     std::span<const double> gains_desc);

// Weighted sum rate maximization over the degraded broadcast capacity region:
// reduce weights, split power along the envelope, then credit each layer rate
// to the subset attaining the layer weight.
RateAllocation solve_wsr(std::span<const double> subset_weights,
                         const ChannelState& channel,
                         double power_budget);

// Exhaustive search over the simplex grid {power splits with coordinates
// multiples of grid_step}, evaluated through the cumulative-power form so the
// scan is O(K * budget/grid_step). Self-contained testing oracle, K <= 4.
double wsr_bruteforce(std::span<const double> subset_weights,
                      const ChannelState& channel,
                      double power_budget,
                      double grid_step);

}  // namespace ccfair
