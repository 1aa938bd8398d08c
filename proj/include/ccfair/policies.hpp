#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccfair/bc_capacity.hpp"
#include "ccfair/channel.hpp"
#include "ccfair/queue_network.hpp"

namespace ccfair {

// Alpha-fair utility: (d+x)^(1-a)/(1-a), natural log of (1+x/d) at a = 1.
double g_utility(double x, double alpha, double d_shift);

// Closed-form maximizer of V g(x) - U x over [0, gamma_max].
double gamma_opt(double virtual_backlog, const FairnessConfig& fair);

// On-off admission: pull gamma_max files whenever the virtual queue is at
// least as long as the user queue.
std::vector<double> admission_infinite(const QueueState& state, const FairnessConfig& fair);

// Dynamic-request variant: admit this slot's arrivals under the same
// indicator; everything else is rejected.
std::vector<double> admission_stochastic(const QueueState& state, std::span<const double> arrivals);

// Truncated-Poisson request batch for one slot.
std::vector<double> sample_arrivals(const ArrivalModel& arrivals, int users, uint64_t seed, uint64_t slot);

// Backpressure routing: request sigma_max combinations for every demand set
// whose queue pressure is strictly positive.
std::vector<double> routing_rule(const QueueState& state, const SystemParams& params);

// Max-weight scheduling: weighted sum rate maximization with the codeword
// backlogs as weights.
RateAllocation scheduling_rule(const QueueState& state, const ChannelState& channel,
                               const SystemParams& params);

// ---------------------------------------------------------------------------
// Baselines

struct UnicastOpportunisticState {
  std::vector<double> rate_sum;  // cumulative bits/use granted per user
  uint64_t slots = 0;
  double epsilon = 1e-6;  // stands in for the empirical average before slot 1
};

UnicastOpportunisticState make_unicast_state(int users);

struct UnicastServe {
  int user = 0;
  double bits_per_use = 0.0;
  double bits = 0.0;
};

// Serves argmax_k log2(1 + h_k P) / T_k^alpha with the full budget, then folds
// the slot into the running averages (zero for everyone else).
UnicastServe unicast_opportunistic_step(UnicastOpportunisticState& state, const ChannelState& channel,
                                        const SystemParams& params);

// Symmetric per-user delivery rate of the standard multicast scheme: worst
// user rate divided by the per-demand load. Closed form for deterministic
// channels, Monte Carlo otherwise. Fully cached systems report +infinity.
double standard_cc_rate_files_per_slot(const SystemParams& params, const ChannelModel& channel,
                                       int mc_draws = 1'000'000, double* standard_error = nullptr);

// ---------------------------------------------------------------------------
// Static randomized policies (stability-region instrument)

struct StaticRateChoice {
  double probability = 1.0;
  std::vector<SubsetRate> rates;
  std::vector<double> power_by_user;
};

struct StaticEntry {
  std::vector<double> gains;            // exact channel state this row covers
  std::vector<double> admission_mean;   // per user
  std::vector<SubsetAmount> combine_mean;
  std::vector<StaticRateChoice> rate_choices;  // at most K+1, probabilities sum to 1
};

struct StaticDecisionTable {
  std::vector<StaticEntry> entries;
};

void validate(const StaticDecisionTable& table, const SystemParams& params);

// Draws a decision for the slot from the table row matching the channel state
// exactly; queue state is ignored. Missing rows are a configuration error.
SlotDecision static_policy_step(const StaticDecisionTable& table, const ChannelState& channel,
                                const SystemParams& params, uint64_t seed, uint64_t slot);

}  // namespace ccfair
