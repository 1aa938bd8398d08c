#include "ccfair/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "ccfair/params.hpp"
#include "ccfair/rng.hpp"

namespace ccfair {

std::vector<double> two_class_means(int users) {
  std::vector<double> means(users, 0.2);
  const int strong = (users + 1) / 2;
  for (int k = 0; k < strong; ++k) means[k] = 1.0;
  return means;
}

std::vector<double> symmetric_means(int users) { return std::vector<double>(users, 1.0); }

ChannelModel make_channel_model(ChannelKind kind, GainPreset preset, int users, uint64_t seed) {
  ChannelModel model;
  model.kind = kind;
  model.preset = preset;
  model.seed = seed;
  switch (preset) {
    case GainPreset::symmetric: model.mean_gains = symmetric_means(users); break;
    case GainPreset::two_class: model.mean_gains = two_class_means(users); break;
    case GainPreset::custom: model.mean_gains = symmetric_means(users); break;
  }
  return model;
}

void validate(const ChannelModel& model) {
  if (model.mean_gains.empty() || model.mean_gains.size() > static_cast<size_t>(kMaxUsers))
    throw ConfigError("channel model: need 1..16 mean gains");
  for (double b : model.mean_gains)
    if (!(b > 0.0) || !std::isfinite(b)) throw ConfigError("channel model: mean gains must be positive");
}

ChannelState sample_channel(const ChannelModel& model, uint64_t slot) {
  ChannelState state;
  state.gains.resize(model.mean_gains.size());
  if (model.kind == ChannelKind::deterministic) {
    state.gains = model.mean_gains;
    return state;
  }
  for (size_t k = 0; k < model.mean_gains.size(); ++k)
    state.gains[k] = counter_exponential(model.mean_gains[k], model.seed, slot, k);
  return state;
}

}  // namespace ccfair
