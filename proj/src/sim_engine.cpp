#include "ccfair/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "ccfair/rng.hpp"

namespace ccfair {

namespace {

constexpr uint64_t kChannelStream = 1;
constexpr uint64_t kArrivalStream = 2;
constexpr uint64_t kStaticStream = 3;
constexpr uint64_t kDriftStream = 4;

struct WindowAccum {
  uint64_t slots = 0;
  std::vector<double> user_files;
  std::vector<double> virtual_files;
  double codeword_load = 0.0;

  explicit WindowAccum(int users) : user_files(users, 0.0), virtual_files(users, 0.0) {}

  void add(const QueueState& state, double file_size_bits) {
    ++slots;
    for (size_t k = 0; k < user_files.size(); ++k) {
      user_files[k] += state.user_files[k];
      virtual_files[k] += state.virtual_files[k];
    }
    double q = 0.0;
    for (double bits : state.codeword_bits) q += bits;
    codeword_load += q / (file_size_bits * file_size_bits);
  }
};

double codeword_load_of(const QueueState& state, double file_size_bits) {
  double q = 0.0;
  for (double bits : state.codeword_bits) q += bits;
  return q / (file_size_bits * file_size_bits);
}

bool queues_empty(const QueueState& state) {
  for (double s : state.user_files)
    if (s > 1e-9) return false;
  for (double q : state.codeword_bits)
    if (q > 1e-9) return false;
  return true;
}

}  // namespace

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::proposed: return "proposed";
    case PolicyKind::unicast_opp: return "unicast_opp";
    case PolicyKind::standard_cc: return "standard_cc";
    case PolicyKind::static_table: return "static";
  }
  return "unknown";
}

PolicyKind policy_from_string(const std::string& name) {
  if (name == "proposed") return PolicyKind::proposed;
  if (name == "unicast_opp") return PolicyKind::unicast_opp;
  if (name == "standard_cc") return PolicyKind::standard_cc;
  if (name == "static") return PolicyKind::static_table;
  throw ConfigError("unknown policy: " + name);
}

void validate(const RunConfig& config) {
  validate(config.sys);
  validate(config.channel);
  if (config.channel.mean_gains.size() != static_cast<size_t>(config.sys.users))
    throw ConfigError("config: channel mean gains do not match users");
  if (config.horizon_slots < 1) throw ConfigError("config: horizon must be >= 1");
  if (config.sys.memory_fraction >= 1.0 &&
      (config.policy == PolicyKind::proposed || config.policy == PolicyKind::static_table))
    throw ConfigError("config: a fully cached system leaves nothing to deliver");
  if (config.arrivals.kind == ArrivalModel::Kind::stochastic) {
    if (!(config.arrivals.mean_files_per_slot > 0.0))
      throw ConfigError("config: arrival mean must be > 0");
    if (!(config.arrivals.max_files >= 1.0) ||
        config.arrivals.max_files != std::floor(config.arrivals.max_files))
      throw ConfigError("config: arrival cap must be an integer >= 1");
    if (config.sys.fair.gamma_max_files < config.arrivals.max_files ||
        config.sys.fair.sigma_max < config.arrivals.max_files)
      throw ConfigError("config: gamma_max and sigma_max must be >= the arrival cap");
  }
  if (config.policy == PolicyKind::static_table) {
    if (!config.static_table) throw ConfigError("config: static policy needs a decision table");
    validate(*config.static_table, config.sys);
  }
}

namespace {

// Proposed scheme and static tables run through the queue network; the two
// baselines keep their own delivery accounting.
RunMetrics run_queued(const RunConfig& config) {
  const SystemParams& sys = config.sys;
  const int users = sys.users;
  const uint64_t horizon = config.horizon_slots;
  const uint64_t warmup = horizon / 10;

  ChannelModel channel = config.channel;
  channel.seed = mix64(config.seed ^ kChannelStream);
  const uint64_t arrival_seed = mix64(config.seed ^ kArrivalStream);
  const uint64_t static_seed = mix64(config.seed ^ kStaticStream);

  QueueState state = make_queue_state(users);
  DeliveryLedger ledger = make_ledger(users);
  WindowAccum window(users);
  std::vector<double> drained_at_warmup(users, 0.0);
  std::vector<double> offered_at_warmup(users, 0.0);

  RunMetrics metrics;
  metrics.config = config;

  const bool stochastic = config.arrivals.kind == ArrivalModel::Kind::stochastic;

  for (uint64_t t = 0; t < horizon; ++t) {
    if (t == warmup) {
      drained_at_warmup = ledger.drained_bits;
      offered_at_warmup = ledger.offered_bits;
    }
    const ChannelState h = sample_channel(channel, t);

    SlotDecision decision;
    if (config.policy == PolicyKind::proposed) {
      decision = make_slot_decision(users);
      for (int k = 0; k < users; ++k)
        decision.virtual_arrivals[k] = gamma_opt(state.virtual_files[k], sys.fair);
      if (stochastic) {
        const std::vector<double> requests = sample_arrivals(config.arrivals, users, arrival_seed, t);
        decision.admissions = admission_stochastic(state, requests);
      } else {
        decision.admissions = admission_infinite(state, sys.fair);
      }
      decision.combine = routing_rule(state, sys);
      RateAllocation allocation = scheduling_rule(state, h, sys);
      decision.rates = std::move(allocation.rates);
      for (int i = 0; i < users; ++i) decision.power_by_user[allocation.order[i]] = allocation.power[i];
    } else {
      decision = static_policy_step(*config.static_table, h, sys, static_seed, t);
    }

    const SlotOutcome outcome = apply_slot(state, decision, sys);
    ledger.record(outcome, decision, sys);

    if (t >= warmup) window.add(state, sys.file_size_bits);
    if (config.metric_sample_period && t % config.metric_sample_period == 0) {
      double su = 0.0, sv = 0.0;
      for (int k = 0; k < users; ++k) {
        su += state.user_files[k];
        sv += state.virtual_files[k];
      }
      metrics.trajectory.push_back({t, su, sv, codeword_load_of(state, sys.file_size_bits)});
    }
  }

  if (config.drain_after_horizon) {
    const uint64_t drain_cap = 60 * horizon + 1'000'000;
    uint64_t t = horizon;
    while (!queues_empty(state)) {
      if (t - horizon > drain_cap) throw std::runtime_error("drain did not complete");
      const ChannelState h = sample_channel(channel, t);
      SlotDecision decision = make_slot_decision(users);
      decision.combine = routing_rule(state, sys);
      RateAllocation allocation = scheduling_rule(state, h, sys);
      decision.rates = std::move(allocation.rates);
      const SlotOutcome outcome = apply_slot(state, decision, sys);
      ledger.record(outcome, decision, sys);
      ++t;
    }
    metrics.drain_slots_used = t - horizon;
  }

  const double window_slots = static_cast<double>(horizon - warmup);
  const double bits_per_file = (1.0 - sys.memory_fraction) * sys.file_size_bits;
  metrics.rate_files_per_slot.assign(users, 0.0);
  metrics.offered_rate_files_per_slot.assign(users, 0.0);
  for (int k = 0; k < users; ++k) {
    metrics.rate_files_per_slot[k] =
        (ledger.drained_bits[k] - drained_at_warmup[k]) / (window_slots * bits_per_file);
    metrics.offered_rate_files_per_slot[k] =
        (ledger.offered_bits[k] - offered_at_warmup[k]) / (window_slots * bits_per_file);
    metrics.sum_rate += metrics.rate_files_per_slot[k];
    metrics.utility += g_utility(metrics.rate_files_per_slot[k], sys.fair.alpha, sys.fair.d_shift);
  }

  metrics.avg_user_files.assign(users, 0.0);
  metrics.avg_virtual_files.assign(users, 0.0);
  for (int k = 0; k < users; ++k) {
    metrics.avg_user_files[k] = window.user_files[k] / window.slots;
    metrics.avg_virtual_files[k] = window.virtual_files[k] / window.slots;
    metrics.avg_total_queue += metrics.avg_user_files[k] + metrics.avg_virtual_files[k];
  }
  metrics.avg_codeword_load = window.codeword_load / window.slots;
  metrics.avg_total_queue += metrics.avg_codeword_load;

  metrics.admitted_files = ledger.admitted_files;
  metrics.delivered_files.assign(users, 0.0);
  for (int k = 0; k < users; ++k) metrics.delivered_files[k] = ledger.delivered_files(k, sys);
  return metrics;
}

RunMetrics run_unicast(const RunConfig& config) {
  const SystemParams& sys = config.sys;
  const int users = sys.users;
  const uint64_t horizon = config.horizon_slots;
  const uint64_t warmup = horizon / 10;

  ChannelModel channel = config.channel;
  channel.seed = mix64(config.seed ^ kChannelStream);

  UnicastOpportunisticState state = make_unicast_state(users);
  std::vector<double> bits(users, 0.0), bits_at_warmup(users, 0.0);

  RunMetrics metrics;
  metrics.config = config;
  for (uint64_t t = 0; t < horizon; ++t) {
    if (t == warmup) bits_at_warmup = bits;
    const ChannelState h = sample_channel(channel, t);
    const UnicastServe serve = unicast_opportunistic_step(state, h, sys);
    bits[serve.user] += serve.bits;
  }

  const double window_slots = static_cast<double>(horizon - warmup);
  const double bits_per_file = (1.0 - sys.memory_fraction) * sys.file_size_bits;
  metrics.rate_files_per_slot.assign(users, 0.0);
  for (int k = 0; k < users; ++k) {
    metrics.rate_files_per_slot[k] = (bits[k] - bits_at_warmup[k]) / (window_slots * bits_per_file);
    metrics.sum_rate += metrics.rate_files_per_slot[k];
    metrics.utility += g_utility(metrics.rate_files_per_slot[k], sys.fair.alpha, sys.fair.d_shift);
  }
  metrics.offered_rate_files_per_slot = metrics.rate_files_per_slot;
  metrics.avg_user_files.assign(users, 0.0);
  metrics.avg_virtual_files.assign(users, 0.0);
  metrics.admitted_files.assign(users, 0.0);
  metrics.delivered_files.assign(users, 0.0);
  for (int k = 0; k < users; ++k)
    metrics.delivered_files[k] = bits[k] / bits_per_file;
  return metrics;
}

// Round-robin multicast at the worst instantaneous rate: every slot delivers
// bits useful to all users at once; a full demand round costs load * F bits.
RunMetrics run_standard_cc(const RunConfig& config) {
  const SystemParams& sys = config.sys;
  const int users = sys.users;
  const uint64_t horizon = config.horizon_slots;
  const uint64_t warmup = horizon / 10;

  ChannelModel channel = config.channel;
  channel.seed = mix64(config.seed ^ kChannelStream);

  const double load = standard_cc_load_files(users, sys.memory_fraction);
  double bits = 0.0, bits_at_warmup = 0.0;
  for (uint64_t t = 0; t < horizon; ++t) {
    if (t == warmup) bits_at_warmup = bits;
    const ChannelState h = sample_channel(channel, t);
    const double worst = *std::min_element(h.gains.begin(), h.gains.end());
    bits += sys.slot_channel_uses * std::log2(1.0 + sys.power * worst);
  }

  const double window_slots = static_cast<double>(horizon - warmup);
  RunMetrics metrics;
  metrics.config = config;
  const double per_user = load > 0.0
                              ? (bits - bits_at_warmup) / (window_slots * load * sys.file_size_bits)
                              : std::numeric_limits<double>::infinity();
  metrics.rate_files_per_slot.assign(users, per_user);
  metrics.offered_rate_files_per_slot = metrics.rate_files_per_slot;
  for (int k = 0; k < users; ++k) {
    metrics.sum_rate += per_user;
    metrics.utility += g_utility(per_user, sys.fair.alpha, sys.fair.d_shift);
  }
  metrics.avg_user_files.assign(users, 0.0);
  metrics.avg_virtual_files.assign(users, 0.0);
  metrics.admitted_files.assign(users, 0.0);
  metrics.delivered_files.assign(users, per_user * horizon);
  return metrics;
}

}  // namespace

RunMetrics run(const RunConfig& config) {
  validate(config);
  RunMetrics metrics;
  switch (config.policy) {
    case PolicyKind::proposed:
    case PolicyKind::static_table:
      metrics = run_queued(config);
      break;
    case PolicyKind::unicast_opp:
      metrics = run_unicast(config);
      break;
    case PolicyKind::standard_cc:
      metrics = run_standard_cc(config);
      break;
  }
  metrics.b_estimate = estimate_drift_constant(config);
  return metrics;
}

double estimate_drift_constant(const RunConfig& config, int mc_draws) {
  const SystemParams& sys = config.sys;
  const int users = sys.users;
  const double sigma_max = sys.fair.sigma_max;
  const double gamma_max = sys.fair.gamma_max_files;
  const double f2 = sys.file_size_bits * sys.file_size_bits;
  const double subsets_with_user = std::ldexp(1.0, users - 1);  // 2^(K-1)

  double b = 0.0;
  for (int k = 0; k < users; ++k) {
    const double combine_bound = sigma_max * subsets_with_user;
    b += gamma_max * gamma_max + 0.5 * combine_bound * combine_bound;
  }

  const CacheParams cache = sys.cache();
  for (int j = 1; j <= users; ++j) {
    double choose_j = 1.0;
    for (int x = 0; x < j; ++x) choose_j = choose_j * (users - x) / (x + 1);
    double choose_i = static_cast<double>(j);  // C(j, 1)
    for (int i = 1; i <= j; ++i) {
      const double bits = codeword_bits(j, i, cache);
      b += choose_j * choose_i * (sigma_max * bits) * (sigma_max * bits) / (2.0 * f2);
      choose_i = choose_i * (j - i) / (i + 1);
    }
  }

  const uint64_t seed = mix64(config.seed ^ kDriftStream);
  const double t2 = sys.slot_channel_uses * sys.slot_channel_uses;
  for (int k = 0; k < users; ++k) {
    double second_moment;
    if (config.channel.kind == ChannelKind::deterministic) {
      const double r = std::log2(1.0 + sys.power * config.channel.mean_gains[k]);
      second_moment = r * r;
    } else {
      double sum = 0.0;
      for (int i = 0; i < mc_draws; ++i) {
        const double h = counter_exponential(config.channel.mean_gains[k], seed, k, i);
        const double r = std::log2(1.0 + sys.power * h);
        sum += r * r;
      }
      second_moment = sum / mc_draws;
    }
    b += t2 / (2.0 * f2) * subsets_with_user * second_moment;
  }
  return b;
}

SweepAxis axis_from_string(const std::string& name) {
  if (name == "K" || name == "users") return SweepAxis::users;
  if (name == "V" || name == "v_param") return SweepAxis::v_param;
  if (name == "alpha") return SweepAxis::alpha;
  throw ConfigError("unknown sweep axis: " + name);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::users: return "K";
    case SweepAxis::v_param: return "V";
    case SweepAxis::alpha: return "alpha";
  }
  return "unknown";
}

std::vector<RunMetrics> sweep(const RunConfig& base, SweepAxis axis, std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep: no values given");

  std::vector<RunConfig> configs;
  configs.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    RunConfig config = base;
    const double v = values[i];
    switch (axis) {
      case SweepAxis::users: {
        if (v < 1 || v > kMaxUsers || v != std::floor(v))
          throw ConfigError("sweep: K values must be integers in [1, 16]");
        config.sys.users = static_cast<int>(v);
        if (config.channel.preset == GainPreset::custom)
          throw ConfigError("sweep over K needs a channel preset to rebuild the gains");
        config.channel =
            make_channel_model(config.channel.kind, config.channel.preset, config.sys.users, 0);
        break;
      }
      case SweepAxis::v_param:
        if (!(v > 0)) throw ConfigError("sweep: V values must be > 0");
        config.sys.fair.v_param = v;
        break;
      case SweepAxis::alpha:
        if (!(v >= 0)) throw ConfigError("sweep: alpha values must be >= 0");
        config.sys.fair.alpha = v;
        break;
    }
    config.seed = mix64(base.seed ^ (0xA11ull + i));
    validate(config);
    configs.push_back(std::move(config));
  }

  std::vector<std::future<RunMetrics>> futures;
  futures.reserve(configs.size());
  for (const RunConfig& config : configs)
    futures.push_back(std::async(std::launch::async, [config] { return run(config); }));

  std::vector<RunMetrics> out;
  out.reserve(configs.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace ccfair
