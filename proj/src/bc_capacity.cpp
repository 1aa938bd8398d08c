#include "ccfair/bc_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ccfair {

namespace {

void check_channel(const ChannelState& channel) {
  if (channel.gains.empty() || channel.gains.size() > static_cast<size_t>(kMaxUsers))
    throw std::domain_error("channel state: need 1..16 users");
  for (double h : channel.gains)
    if (!(h >= 0.0) || !std::isfinite(h))
      throw std::domain_error("channel state: gains must be finite and nonnegative");
}

std::vector<int> strength_order(const ChannelState& channel) {
  std::vector<int> order(channel.gains.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return channel.gains[a] > channel.gains[b]; });
  return order;
}

}  // namespace

ReducedWeights reduce_weights(std::span<const double> subset_weights, const ChannelState& channel) {
  check_channel(channel);
  const int users = static_cast<int>(channel.gains.size());
  const uint32_t n = uint32_t{1} << users;
  if (subset_weights.size() < n)
    throw std::domain_error("reduce_weights: weight vector must have size 2^K");
  for (uint32_t mask = 1; mask < n; ++mask)
    if (!(subset_weights[mask] >= 0.0) || !std::isfinite(subset_weights[mask]))
      throw std::domain_error("reduce_weights: weights must be finite and nonnegative");

  ReducedWeights out;
  out.order = strength_order(channel);
  out.weight.assign(users, 0.0);
  out.best_subset.assign(users, 0);

  std::vector<int> position_of(users);
  for (int i = 0; i < users; ++i) position_of[out.order[i]] = i;

  // weakest_position[mask]: largest strength position among members, i.e. the
  // layer whose budget the subset's message consumes.
  std::vector<int> weakest_position(n, -1);
  std::vector<bool> seen(users, false);
  for (uint32_t mask = 1; mask < n; ++mask) {
    const int low_user = std::countr_zero(mask);
    const uint32_t rest = mask & (mask - 1);
    weakest_position[mask] = std::max(position_of[low_user], rest ? weakest_position[rest] : -1);

    const int pos = weakest_position[mask];
    const double w = subset_weights[mask];
    if (!seen[pos]) {
      seen[pos] = true;
      out.weight[pos] = w;
      out.best_subset[pos] = mask;
      continue;
    }
    const double best = out.weight[pos];
    if (w > best) {
      out.weight[pos] = w;
      out.best_subset[pos] = mask;
    } else if (w == best) {
      const int pc_new = subset_size(mask);
      const int pc_old = subset_size(out.best_subset[pos]);
      if (pc_new > pc_old || (pc_new == pc_old && mask < out.best_subset[pos]))
        out.best_subset[pos] = mask;
    }
  }
  return out;
}

std::vector<PowerSegment> power_segments(const ReducedWeights& reduced,
                                         const ChannelState& channel,
                                         double power_budget) {
  check_channel(channel);
  const int users = static_cast<int>(channel.gains.size());
  if (!(power_budget >= 0.0)) throw std::domain_error("power_segments: budget must be >= 0");

  std::vector<PowerSegment> segments;
  if (power_budget == 0.0) return segments;

  double wmax = 0.0;
  for (double w : reduced.weight) wmax = std::max(wmax, w);
  if (wmax <= 0.0) return segments;

  std::vector<double> inv(users);
  for (int i = 0; i < users; ++i) {
    const double h = channel.gains[reduced.order[i]];
    inv[i] = h > 0.0 ? 1.0 / h : std::numeric_limits<double>::infinity();
  }
  auto utility = [&](int i, double z) { return reduced.weight[i] / (inv[i] + z); };

  // Initial winner at z = 0; ties go to the larger weight (it decays slower,
  // so it owns the segment ahead), then to the stronger position.
  int winner = 0;
  for (int i = 1; i < users; ++i) {
    const double ui = utility(i, 0.0), uw = utility(winner, 0.0);
    if (ui > uw || (ui == uw && reduced.weight[i] > reduced.weight[winner])) winner = i;
  }

  double z = 0.0;
  // Winners carry strictly increasing weights, so at most K segments.
  for (int guard = 0; guard <= users && z < power_budget; ++guard) {
    double z_next = power_budget;
    int next = -1;
    for (int j = 0; j < users; ++j) {
      if (reduced.weight[j] <= reduced.weight[winner]) continue;
      if (std::isinf(inv[j])) continue;
      const double num = reduced.weight[winner] * inv[j] - reduced.weight[j] * inv[winner];
      const double den = reduced.weight[j] - reduced.weight[winner];
      double zc = num / den;
      if (std::isinf(inv[winner])) zc = z;  // a zero-gain winner is overtaken immediately
      zc = std::max(zc, z);                 // clamp near-tangent / stale crossings
      if (zc < z_next) {
        z_next = zc;
        next = j;
      }
    }
    if (z_next > z) segments.push_back({winner, z, z_next});
    if (next < 0 || z_next >= power_budget) break;
    winner = next;
    z = z_next;
  }
  return segments;
}

std::vector<double> allocate_power(const ReducedWeights& reduced,
                                   const ChannelState& channel,
                                   double power_budget) {
  std::vector<double> power(channel.gains.size(), 0.0);
  for (const PowerSegment& s : power_segments(reduced, channel, power_budget))
    power[s.position] += s.z_hi - s.z_lo;
  return power;
}

std::vector<double> rates_from_power(std::span<const double> power_by_position,
                                     std::span<const double> gains_desc) {
  if (power_by_position.size() != gains_desc.size())
    throw std::domain_error("rates_from_power: size mismatch");
  const int users = static_cast<int>(gains_desc.size());
  std::vector<double> rates(users, 0.0);
  double below = 0.0;  // cumulative power of stronger positions
  for (int i = 0; i < users; ++i) {
    const double h = gains_desc[i];
    const double total = below + power_by_position[i];
    rates[i] = std::max(0.0, std::log2((1.0 + h * total) / (1.0 + h * below)));
    below = total;
  }
  return rates;
}

RateAllocation solve_wsr(std::span<const double> subset_weights,
                         const ChannelState& channel,
                         double power_budget) {
  const ReducedWeights reduced = reduce_weights(subset_weights, channel);
  const int users = static_cast<int>(channel.gains.size());

  RateAllocation out;
  out.order = reduced.order;
  out.power = allocate_power(reduced, channel, power_budget);

  std::vector<double> gains_desc(users);
  for (int i = 0; i < users; ++i) gains_desc[i] = channel.gains[reduced.order[i]];
  const std::vector<double> layer_rates = rates_from_power(out.power, gains_desc);

  for (int i = 0; i < users; ++i) {
    if (layer_rates[i] <= 0.0) continue;
    out.rates.push_back({reduced.best_subset[i], layer_rates[i]});
    out.weighted_sum += reduced.weight[i] * layer_rates[i];
  }
  return out;
}

double wsr_bruteforce(std::span<const double> subset_weights,
                      const ChannelState& channel,
                      double power_budget,
                      double grid_step) {
  check_channel(channel);
  const int users = static_cast<int>(channel.gains.size());
  if (users > 4) throw std::domain_error("wsr_bruteforce: K <= 4 only");
  if (!(power_budget >= 0.0)) throw std::domain_error("wsr_bruteforce: budget must be >= 0");
  if (!(grid_step > 0.0)) throw std::domain_error("wsr_bruteforce: grid step must be > 0");
  const uint32_t n = uint32_t{1} << users;
  if (subset_weights.size() < n)
    throw std::domain_error("wsr_bruteforce: weight vector must have size 2^K");

  // Independent layer-weight reduction by plain scan.
  std::vector<int> order(users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return channel.gains[a] > channel.gains[b]; });
  std::vector<int> position_of(users);
  for (int i = 0; i < users; ++i) position_of[order[i]] = i;

  std::vector<double> layer_weight(users, 0.0);
  for (uint32_t mask = 1; mask < n; ++mask) {
    int pos = 0;
    for (int u = 0; u < users; ++u)
      if (mask & (uint32_t{1} << u)) pos = std::max(pos, position_of[u]);
    layer_weight[pos] = std::max(layer_weight[pos], subset_weights[mask]);
  }

  std::vector<double> h(users);
  for (int i = 0; i < users; ++i) h[i] = channel.gains[order[i]];

  const uint64_t grid = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(power_budget / grid_step)));
  if (grid > 50'000'000ull) throw std::domain_error("wsr_bruteforce: grid too fine");
  const double step = power_budget > 0.0 ? power_budget / static_cast<double>(grid) : 0.0;

  // The objective is separable in the cumulative powers C_1 <= ... <= C_K:
  //   sum_k [ w_k log2(1 + h_k C_k) - w_{k+1} log2(1 + h_{k+1} C_k) ].
  // A forward pass with running prefix maxima therefore searches the entire
  // simplex grid exactly.
  std::vector<double> prefix_best(grid + 1, 0.0);
  for (int k = 0; k < users; ++k) {
    const double w_here = layer_weight[k];
    const double w_next = k + 1 < users ? layer_weight[k + 1] : 0.0;
    const double h_here = h[k];
    const double h_next = k + 1 < users ? h[k + 1] : 0.0;
    double running = -std::numeric_limits<double>::infinity();
    for (uint64_t g = 0; g <= grid; ++g) {
      const double c = static_cast<double>(g) * step;
      const double value = prefix_best[g] + w_here * std::log2(1.0 + h_here * c) -
                           w_next * std::log2(1.0 + h_next * c);
      running = std::max(running, value);
      prefix_best[g] = running;
    }
  }
  return prefix_best[grid];
}

}  // namespace ccfair
