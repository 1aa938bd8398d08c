#pragma once

#include "ccfair/errors.hpp"
#include "ccfair/subsets.hpp"

namespace ccfair {

// Knobs of the drift-plus-penalty controller and the alpha-fair objective.
// Larger v_param trades longer queues for utility closer to the optimum.
struct FairnessConfig {
  double alpha = 0.0;
  double d_shift = 0.1;         // domain shift extending the utility to x = 0
  double v_param = 1000.0;
  double gamma_max_files = 2.0; // per-slot cap on virtual arrivals / admissions
  double sigma_max = 2.0;       // integer cap on combinations per subset
};

struct ArrivalModel {
  enum class Kind { infinite_backlog, stochastic };
  Kind kind = Kind::infinite_backlog;
  double mean_files_per_slot = 0.5; // Poisson mean per user (stochastic only)
  double max_files = 2.0;           // per-slot cap A_max
};

struct SystemParams {
  int users = 0;
  double memory_fraction = 0.0;    // m
  double file_size_bits = 0.0;     // F
  double slot_channel_uses = 0.0;  // T_slot
  double power = 0.0;              // linear transmit power budget
  FairnessConfig fair;

  CacheParams cache() const { return {users, memory_fraction, file_size_bits}; }
};

void validate(const FairnessConfig& fair);
void validate(const SystemParams& params);

}  // namespace ccfair
