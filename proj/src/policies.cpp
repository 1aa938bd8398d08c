#include "ccfair/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ccfair/rng.hpp"

namespace ccfair {

void validate(const FairnessConfig& fair) {
  if (!(fair.alpha >= 0.0)) throw ConfigError("fairness: alpha must be >= 0");
  if (!(fair.d_shift > 0.0)) throw ConfigError("fairness: d_shift must be > 0");
  if (!(fair.v_param > 0.0)) throw ConfigError("fairness: v_param must be > 0");
  if (!(fair.gamma_max_files > 0.0)) throw ConfigError("fairness: gamma_max_files must be > 0");
  if (!(fair.sigma_max >= 1.0) || fair.sigma_max != std::floor(fair.sigma_max))
    throw ConfigError("fairness: sigma_max must be an integer >= 1");
}

void validate(const SystemParams& params) {
  if (params.users < 1 || params.users > kMaxUsers) throw ConfigError("system: users must be in [1, 16]");
  if (!(params.memory_fraction >= 0.0 && params.memory_fraction <= 1.0))
    throw ConfigError("system: memory_fraction must be in [0, 1]");
  if (!(params.file_size_bits > 0.0)) throw ConfigError("system: file_size_bits must be > 0");
  if (!(params.slot_channel_uses > 0.0)) throw ConfigError("system: slot_channel_uses must be > 0");
  if (!(params.power >= 0.0)) throw ConfigError("system: power must be >= 0");
  validate(params.fair);
}

double g_utility(double x, double alpha, double d_shift) {
  if (alpha == 1.0) return std::log(1.0 + x / d_shift);
  return std::pow(d_shift + x, 1.0 - alpha) / (1.0 - alpha);
}

double gamma_opt(double virtual_backlog, const FairnessConfig& fair) {
  const double u = virtual_backlog;
  const double cap = fair.gamma_max_files;
  if (u <= 0.0) return cap;
  if (fair.alpha == 0.0) return u <= fair.v_param ? cap : 0.0;
  double x;
  if (fair.alpha == 1.0) {
    x = fair.v_param / u - fair.d_shift;
  } else {
    x = std::pow(fair.v_param / u, 1.0 / fair.alpha) - fair.d_shift;
  }
  return std::clamp(x, 0.0, cap);
}

std::vector<double> admission_infinite(const QueueState& state, const FairnessConfig& fair) {
  std::vector<double> a(state.user_files.size(), 0.0);
  for (size_t k = 0; k < a.size(); ++k)
    if (state.virtual_files[k] >= state.user_files[k]) a[k] = fair.gamma_max_files;
  return a;
}

std::vector<double> admission_stochastic(const QueueState& state, std::span<const double> arrivals) {
  std::vector<double> a(state.user_files.size(), 0.0);
  for (size_t k = 0; k < a.size(); ++k)
    if (state.virtual_files[k] >= state.user_files[k]) a[k] = arrivals[k];
  return a;
}

std::vector<double> sample_arrivals(const ArrivalModel& arrivals, int users, uint64_t seed, uint64_t slot) {
  std::vector<double> out(users, 0.0);
  if (arrivals.kind == ArrivalModel::Kind::infinite_backlog) return out;
  const double lambda = arrivals.mean_files_per_slot;
  const int cap = static_cast<int>(arrivals.max_files);
  for (int k = 0; k < users; ++k) {
    const double u = counter_u01(seed, slot, static_cast<uint64_t>(k));
    double pmf = std::exp(-lambda);
    double cdf = pmf;
    int draw = 0;
    while (draw < cap && u > cdf) {
      ++draw;
      pmf *= lambda / draw;
      cdf += pmf;
    }
    out[k] = draw;  // mass beyond the cap is lumped onto A_max
  }
  return out;
}

std::vector<double> routing_rule(const QueueState& state, const SystemParams& params) {
  const std::vector<double> scores = routing_scores(state, params);
  std::vector<double> sigma(scores.size(), 0.0);
  for (size_t mask = 1; mask < scores.size(); ++mask)
    if (scores[mask] > 0.0) sigma[mask] = params.fair.sigma_max;
  return sigma;
}

RateAllocation scheduling_rule(const QueueState& state, const ChannelState& channel,
                               const SystemParams& params) {
  return solve_wsr(state.codeword_bits, channel, params.power);
}

UnicastOpportunisticState make_unicast_state(int users) {
  UnicastOpportunisticState s;
  s.rate_sum.assign(users, 0.0);
  return s;
}

UnicastServe unicast_opportunistic_step(UnicastOpportunisticState& state, const ChannelState& channel,
                                        const SystemParams& params) {
  const int users = static_cast<int>(channel.gains.size());
  UnicastServe serve;
  double best = -1.0;
  for (int k = 0; k < users; ++k) {
    const double rate = std::log2(1.0 + channel.gains[k] * params.power);
    const double avg = state.slots == 0 ? state.epsilon : state.rate_sum[k] / static_cast<double>(state.slots);
    const double metric = rate / std::pow(avg, params.fair.alpha);
    if (metric > best) {
      best = metric;
      serve.user = k;
      serve.bits_per_use = rate;
    }
  }
  serve.bits = params.slot_channel_uses * serve.bits_per_use;
  state.rate_sum[serve.user] += serve.bits_per_use;
  ++state.slots;
  return serve;
}

double standard_cc_rate_files_per_slot(const SystemParams& params, const ChannelModel& channel,
                                       int mc_draws, double* standard_error) {
  validate(params);
  validate(channel);
  const double load = standard_cc_load_files(params.users, params.memory_fraction);
  if (standard_error) *standard_error = 0.0;
  if (load == 0.0) return std::numeric_limits<double>::infinity();

  double mean_worst_rate;
  if (channel.kind == ChannelKind::deterministic) {
    const double worst = *std::min_element(channel.mean_gains.begin(), channel.mean_gains.end());
    mean_worst_rate = std::log2(1.0 + params.power * worst);
  } else {
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < mc_draws; ++i) {
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 0; k < params.users; ++k)
        worst = std::min(worst, counter_exponential(channel.mean_gains[k], channel.seed,
                                                    0x57ddc0ull, static_cast<uint64_t>(i) * params.users + k));
      const double v = std::log2(1.0 + params.power * worst);
      sum += v;
      sum_sq += v * v;
    }
    mean_worst_rate = sum / mc_draws;
    if (standard_error) {
      const double var = std::max(0.0, sum_sq / mc_draws - mean_worst_rate * mean_worst_rate);
      *standard_error = std::sqrt(var / mc_draws) * params.slot_channel_uses /
                        (load * params.file_size_bits);
    }
  }
  return params.slot_channel_uses * mean_worst_rate / (load * params.file_size_bits);
}

void validate(const StaticDecisionTable& table, const SystemParams& params) {
  const size_t users = static_cast<size_t>(params.users);
  const size_t n = size_t{1} << params.users;
  if (table.entries.empty()) throw ConfigError("static table: no entries");
  for (const StaticEntry& entry : table.entries) {
    if (entry.gains.size() != users || entry.admission_mean.size() != users)
      throw ConfigError("static table: entry sizes do not match K");
    if (entry.rate_choices.empty() || entry.rate_choices.size() > users + 1)
      throw ConfigError("static table: need 1..K+1 rate vectors");
    for (const SubsetAmount& c : entry.combine_mean) {
      if (c.mask == 0 || c.mask >= n || !(c.value >= 0.0) || c.value > params.fair.sigma_max)
        throw ConfigError("static table: combine means must be masks with values in [0, sigma_max]");
    }
    double prob = 0.0;
    for (const StaticRateChoice& choice : entry.rate_choices) {
      prob += choice.probability;
      if (choice.power_by_user.size() != users)
        throw ConfigError("static table: rate choice needs a power split per user");
      double total_power = 0.0;
      for (double p : choice.power_by_user) {
        if (!(p >= 0.0)) throw ConfigError("static table: powers must be >= 0");
        total_power += p;
      }
      if (total_power > params.power + 1e-9) throw ConfigError("static table: power split exceeds budget");

      // The claimed rate vector must be achievable with the claimed powers.
      ChannelState channel{entry.gains};
      std::vector<int> order(users);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return entry.gains[a] > entry.gains[b]; });
      std::vector<int> position_of(users);
      for (size_t i = 0; i < users; ++i) position_of[order[i]] = static_cast<int>(i);
      std::vector<double> power_desc(users), gains_desc(users);
      for (size_t i = 0; i < users; ++i) {
        power_desc[i] = choice.power_by_user[order[i]];
        gains_desc[i] = entry.gains[order[i]];
      }
      const std::vector<double> layer = rates_from_power(power_desc, gains_desc);
      std::vector<double> group(users, 0.0);
      for (const SubsetRate& r : choice.rates) {
        if (r.mask == 0 || r.mask >= n) throw ConfigError("static table: bad rate mask");
        int pos = 0;
        for (size_t k = 0; k < users; ++k)
          if (r.mask & (SubsetId{1} << k)) pos = std::max(pos, position_of[k]);
        group[pos] += r.bits_per_use;
      }
      for (size_t i = 0; i < users; ++i)
        if (group[i] > layer[i] + 1e-9)
          throw ConfigError("static table: rate vector outside the capacity region");
    }
    if (std::abs(prob - 1.0) > 1e-9) throw ConfigError("static table: rate probabilities must sum to 1");
  }
}

SlotDecision static_policy_step(const StaticDecisionTable& table, const ChannelState& channel,
                                const SystemParams& params, uint64_t seed, uint64_t slot) {
  const StaticEntry* entry = nullptr;
  for (const StaticEntry& e : table.entries)
    if (e.gains == channel.gains) {
      entry = &e;
      break;
    }
  if (!entry) throw ConfigError("static policy: channel state not covered by the table");

  SlotDecision decision = make_slot_decision(params.users);
  decision.admissions = entry->admission_mean;
  for (const SubsetAmount& c : entry->combine_mean) decision.combine[c.mask] = c.value;

  const double u = counter_u01(seed, 0x57a71cull, slot);
  double cdf = 0.0;
  const StaticRateChoice* picked = &entry->rate_choices.back();
  for (const StaticRateChoice& choice : entry->rate_choices) {
    cdf += choice.probability;
    if (u <= cdf) {
      picked = &choice;
      break;
    }
  }
  decision.rates = picked->rates;
  decision.power_by_user = picked->power_by_user;
  return decision;
}

}  // namespace ccfair
