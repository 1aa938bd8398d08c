#pragma once

#include <cstdint>
#include <vector>

#include "ccfair/bc_capacity.hpp"

namespace ccfair {

enum class ChannelKind { deterministic, iid_exponential };
enum class GainPreset { custom, symmetric, two_class };

struct ChannelModel {
  ChannelKind kind = ChannelKind::deterministic;
  GainPreset preset = GainPreset::custom;
  std::vector<double> mean_gains;  // per-user mean gain
  uint64_t seed = 0;
};

// First half strong (mean 1.0), second half weak (mean 0.2); odd K rounds the
// strong class up.
std::vector<double> two_class_means(int users);
std::vector<double> symmetric_means(int users);

ChannelModel make_channel_model(ChannelKind kind, GainPreset preset, int users, uint64_t seed);

void validate(const ChannelModel& model);

// Deterministic models return the means; fading models draw each gain from an
// exponential keyed on (seed, slot, user), so a slot can be replayed directly.
ChannelState sample_channel(const ChannelModel& model, uint64_t slot);

}  // namespace ccfair
