#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ccfair/channel.hpp"
#include "ccfair/policies.hpp"

namespace ccfair {

enum class PolicyKind { proposed, unicast_opp, standard_cc, static_table };

std::string to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& name);

struct RunConfig {
  SystemParams sys;
  ChannelModel channel;
  ArrivalModel arrivals;
  PolicyKind policy = PolicyKind::proposed;
  uint64_t horizon_slots = 100'000;
  uint64_t metric_sample_period = 0;  // 0 disables trajectory sampling
  uint64_t seed = 1;
  bool drain_after_horizon = false;   // stop admissions at the horizon and run until empty
  std::string scenario = "custom";
  std::shared_ptr<const StaticDecisionTable> static_table;
};

void validate(const RunConfig& config);

struct TrajectorySample {
  uint64_t slot = 0;
  double total_user_files = 0.0;
  double total_virtual_files = 0.0;
  double total_codeword_load = 0.0;  // sum of Q_I / F^2
};

struct RunMetrics {
  RunConfig config;
  // Delivery rates over the post-warmup window, files per slot.
  std::vector<double> rate_files_per_slot;          // from bits actually drained
  std::vector<double> offered_rate_files_per_slot;  // from scheduled bits
  double sum_rate = 0.0;
  double utility = 0.0;  // sum of g(r_k) at the run's alpha and d
  // Time averages over the post-warmup window.
  std::vector<double> avg_user_files;     // per user S
  std::vector<double> avg_virtual_files;  // per user U
  double avg_codeword_load = 0.0;         // sum of Q_I / F^2
  double avg_total_queue = 0.0;           // sum S + sum U + codeword load
  // Cumulative counters over the whole run (including any drain phase).
  std::vector<double> admitted_files;
  std::vector<double> delivered_files;
  double b_estimate = 0.0;
  uint64_t drain_slots_used = 0;
  std::vector<TrajectorySample> trajectory;
};

RunMetrics run(const RunConfig& config);

// Monte Carlo estimate of the drift constant whose ratio to v_param bounds
// the utility gap; exact for deterministic channels.
double estimate_drift_constant(const RunConfig& config, int mc_draws = 1'000'000);

enum class SweepAxis { users, v_param, alpha };

SweepAxis axis_from_string(const std::string& name);
std::string to_string(SweepAxis axis);

// Independent runs, one per value, each reseeded deterministically from the
// base seed; executed concurrently and returned in value order.
std::vector<RunMetrics> sweep(const RunConfig& base, SweepAxis axis, std::span<const double> values);

}  // namespace ccfair
