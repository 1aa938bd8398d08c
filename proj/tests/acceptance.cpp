// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ccfair/config.hpp"
#include "ccfair/report.hpp"
#include "ccfair/rng.hpp"

using namespace ccfair;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double stderr_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

double slope_per_slot(const std::vector<double>& ys) {
  const size_t n = ys.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += i;
    sy += ys[i];
    sxx += static_cast<double>(i) * i;
    sxy += i * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Long-run sum delivery rate of the unicast opportunistic baseline on the
//    deterministic two-class scenario at alpha = 0.
Outcome criterion_unicast_anchor() {
  const double target = 0.865;
  double worst = 0.0;
  for (int users : {2, 6}) {
    RunConfig config = scenario_config("det_two_class", users);
    config.policy = PolicyKind::unicast_opp;
    config.sys.fair.alpha = 0.0;
    config.horizon_slots = 100'000;
    const RunMetrics metrics = run(config);
    worst = std::max(worst, std::abs(metrics.sum_rate - target) / target);
  }
  return {worst <= 0.01, fmt("max deviation %.3g%% from 0.865 file/slot", 100.0 * worst)};
}

// 2. Standard multicast: analytic per-user rate, simulated round robin within
//    2%, and sum rate linear in K across 2..10.
Outcome criterion_standard_cc_linearity() {
  std::vector<double> ks, sums;
  double worst_sim = 0.0;
  for (int users = 2; users <= 10; ++users) {
    RunConfig config = scenario_config("det_two_class", users);
    config.policy = PolicyKind::standard_cc;
    config.horizon_slots = 20'000;
    const double analytic = 100.0 * std::log2(3.0) / (standard_cc_load_files(users, 0.6) * 1000.0);
    const double direct = standard_cc_rate_files_per_slot(config.sys, config.channel);
    if (std::abs(direct - analytic) > 1e-9) return {false, "closed form disagrees with itself"};
    const RunMetrics metrics = run(config);
    const double sim = metrics.rate_files_per_slot[0];
    worst_sim = std::max(worst_sim, std::abs(sim - analytic) / analytic);
    ks.push_back(users);
    sums.push_back(metrics.sum_rate);
  }
  // Least-squares line through (K, sum): explained variance at least 99.5%
  // with a positive slope, and an almost constant per-user rate.
  const size_t n = ks.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += ks[i];
    sy += sums[i];
    sxx += ks[i] * ks[i];
    sxy += ks[i] * sums[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ss_res += (sums[i] - (intercept + slope * ks[i])) * (sums[i] - (intercept + slope * ks[i]));
    ss_tot += (sums[i] - sy / n) * (sums[i] - sy / n);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  const double per_user_ratio = (sums.back() / ks.back()) / (sums.front() / ks.front());
  const bool ok = worst_sim <= 0.02 && r2 >= 0.995 && slope > 0.0 &&
                  per_user_ratio > 0.8 && per_user_ratio < 1.25;
  return {ok, fmt("sim vs analytic %.3g%%, R^2 %.5f, slope %.4f, per-user drift x%.3f",
                  100.0 * worst_sim, r2, slope, per_user_ratio)};
}

// 3. Weighted sum rate solver against the simplex-grid oracle.
Outcome criterion_wsr_oracle() {
  const uint64_t seed = 20'240'817;
  int instances = 0;
  double worst = 0.0;
  for (int users = 2; users <= 4; ++users) {
    for (int trial = 0; trial < 334; ++trial) {
      ChannelState channel;
      for (int k = 0; k < users; ++k)
        channel.gains.push_back(counter_exponential(1.0, seed, users * 1000 + trial, k));
      std::vector<double> weights(size_t{1} << users, 0.0);
      for (size_t mask = 1; mask < weights.size(); ++mask)
        weights[mask] = counter_u01(seed, users * 2000 + trial, mask);
      const double budget = 10.0;
      const RateAllocation best = solve_wsr(weights, channel, budget);
      double lipschitz = 1e-9;
      for (double h : channel.gains) lipschitz += 2.0 * h / std::log(2.0);
      const double tol = 1e-3 * std::max(1.0, best.weighted_sum);
      const double step = std::max(tol / (2.0 * lipschitz), budget / 40'000'000.0);
      const double oracle = wsr_bruteforce(weights, channel, budget, step);
      worst = std::max(worst, std::abs(best.weighted_sum - oracle) / std::max(1.0, best.weighted_sum));
      ++instances;
    }
  }
  return {instances >= 1000 && worst <= 1e-3,
          fmt("max relative error %.3g over %d instances", worst, instances)};
}

// 4. Combinatorial normalization identities at 1e-12, K <= 12, m in 0.1..0.9.
Outcome criterion_normalization() {
  double worst = 0.0;
  for (int users = 1; users <= 12; ++users) {
    for (int mi = 1; mi <= 9; ++mi) {
      const CacheParams cache{users, mi / 10.0, 1000.0};
      double total = 0.0, choose = 1.0;
      for (int s = 0; s <= users; ++s) {
        total += choose * subfile_size_bits(s, cache);
        choose = choose * (users - s) / (s + 1);
      }
      worst = std::max(worst, std::abs(total - cache.file_size_bits) / cache.file_size_bits);

      const double uncached = (1.0 - cache.memory_fraction) * cache.file_size_bits;
      for (int j = 1; j <= users; ++j) {
        double sum = 0.0, pick = 1.0;
        for (int i = 1; i <= j; ++i) {
          sum += pick * codeword_bits(j, i, cache);
          pick = pick * (j - i) / i;
        }
        worst = std::max(worst, std::abs(sum - uncached) / uncached);
      }

      double load = 0.0, pickk = 1.0;
      const double m = cache.memory_fraction;
      for (int s = 1; s <= users; ++s) {
        pickk = pickk * (users - s + 1) / s;
        load += pickk * std::pow(m, s - 1) * std::pow(1.0 - m, users - s + 1);
      }
      const double reference = standard_cc_load_files(users, m);
      worst = std::max(worst, std::abs(load - reference) / reference);
    }
  }
  return {worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
}

// 5. Utility-queue tradeoff in V on symmetric fading, alpha = 1.
Outcome criterion_v_tradeoff() {
  const std::vector<double> v_values{10.0, 100.0, 1000.0, 10'000.0};
  const std::vector<uint64_t> seeds{11, 12, 13, 14, 15};
  std::vector<double> utility_mean, utility_se, queue_mean;
  for (double v : v_values) {
    std::vector<double> utilities, queues;
    for (uint64_t seed : seeds) {
      RunConfig config = scenario_config("sym_fading", 4);
      config.sys.fair.alpha = 1.0;
      config.sys.fair.v_param = v;
      // Long enough for the largest V to show its O(V) backlog scaling.
      config.horizon_slots = 400'000;
      config.seed = seed;
      const RunMetrics metrics = run(config);
      utilities.push_back(metrics.utility);
      queues.push_back(metrics.avg_total_queue);
    }
    utility_mean.push_back(mean_of(utilities));
    utility_se.push_back(stderr_of(utilities));
    queue_mean.push_back(mean_of(queues));
  }
  bool ok = true;
  for (size_t i = 0; i + 1 < v_values.size(); ++i) {
    const double allowance =
        std::sqrt(utility_se[i] * utility_se[i] + utility_se[i + 1] * utility_se[i + 1]);
    if (utility_mean[i + 1] < utility_mean[i] - allowance) ok = false;
    if (queue_mean[i + 1] <= queue_mean[i]) ok = false;
  }
  const double ratio = queue_mean[3] / queue_mean[1];
  if (!(ratio >= 10.0 && ratio <= 1000.0)) ok = false;
  return {ok, fmt("utility %.3f / %.3f / %.3f / %.3f, queues %.3g / %.3g / %.3g / %.3g, ratio %.1f",
                  utility_mean[0], utility_mean[1], utility_mean[2], utility_mean[3], queue_mean[0],
                  queue_mean[1], queue_mean[2], queue_mean[3], ratio)};
}

// 6. Proposed scheme beats both baselines cell by cell.
Outcome criterion_dominance() {
  int cells = 0, won = 0;
  double min_margin = 1e30;
  for (const char* scenario : {"sym_fading", "two_class_fading"}) {
    for (int users : {4, 6, 8}) {
      for (double alpha : {0.0, 1.0}) {
        RunConfig config = scenario_config(scenario, users);
        config.sys.fair.alpha = alpha;
        config.horizon_slots = 100'000;
        config.seed = 5;
        double objective[3];
        int idx = 0;
        for (PolicyKind policy :
             {PolicyKind::proposed, PolicyKind::unicast_opp, PolicyKind::standard_cc}) {
          RunConfig c = config;
          c.policy = policy;
          const RunMetrics metrics = run(c);
          objective[idx++] = alpha == 0.0 ? metrics.sum_rate : metrics.utility;
        }
        ++cells;
        if (objective[0] >= objective[1] && objective[0] >= objective[2]) ++won;
        min_margin = std::min(min_margin, objective[0] - std::max(objective[1], objective[2]));
      }
    }
  }
  return {won == cells, fmt("%d/%d cells won, smallest margin %.3f", won, cells, min_margin)};
}

// 7. Stability-region witness on a two-user deterministic channel with a
//    closed-form symmetric boundary.
Outcome criterion_stability_witness() {
  SystemParams sys;
  sys.users = 2;
  sys.memory_fraction = 0.6;
  sys.file_size_bits = 1000.0;
  sys.slot_channel_uses = 100.0;
  sys.power = 10.0;
  sys.fair.sigma_max = 1.0;

  // Equal gains collapse the capacity region to one total-rate budget, so the
  // symmetric admission boundary is T * C / (bits per combined pair).
  const std::vector<double> gains{1.0, 1.0};
  std::vector<double> ones(4, 1.0);
  ones[0] = 0.0;
  const double capacity = solve_wsr(ones, ChannelState{gains}, sys.power).weighted_sum;
  const CacheParams cache = sys.cache();
  const double pair_bits = 2.0 * codeword_bits(2, 1, cache) + codeword_bits(2, 2, cache);
  const double boundary = sys.slot_channel_uses * capacity / pair_bits;

  const double admit = 0.52;
  if (!(admit < boundary && 1.2 * admit > boundary))
    return {false, fmt("witness point %.3f does not straddle the boundary %.4f", admit, boundary)};

  const double sigma_pair = 0.55;
  StaticRateChoice choice;
  choice.probability = 1.0;
  choice.rates = {{0b01, 0.93}, {0b10, 0.93}, {0b11, 1.36}};
  choice.power_by_user = {1.0, 9.0};

  // Strict service margins certify the inside point per the region inequalities.
  if (!(sigma_pair > admit)) return {false, "combination mean does not cover admissions"};
  const double q_in[3] = {codeword_bits(2, 1, cache) * sigma_pair,
                          codeword_bits(2, 1, cache) * sigma_pair,
                          codeword_bits(2, 2, cache) * sigma_pair};
  const double q_cap[3] = {100.0 * 0.93, 100.0 * 0.93, 100.0 * 1.36};
  for (int i = 0; i < 3; ++i)
    if (!(q_cap[i] > q_in[i])) return {false, "rate vector does not cover codeword arrivals"};

  auto run_static = [&](double admissions) {
    StaticDecisionTable table;
    StaticEntry entry;
    entry.gains = gains;
    entry.admission_mean = {admissions, admissions};
    entry.combine_mean.push_back({0b11, sigma_pair});
    entry.rate_choices.push_back(choice);
    table.entries.push_back(entry);

    RunConfig config;
    config.sys = sys;
    config.channel.kind = ChannelKind::deterministic;
    config.channel.preset = GainPreset::custom;
    config.channel.mean_gains = gains;
    config.policy = PolicyKind::static_table;
    config.static_table = std::make_shared<StaticDecisionTable>(table);
    config.horizon_slots = 20'000;
    config.metric_sample_period = 1;
    config.scenario = "custom";
    const RunMetrics metrics = run(config);
    std::vector<double> totals;
    for (size_t i = metrics.trajectory.size() / 2; i < metrics.trajectory.size(); ++i)
      totals.push_back(metrics.trajectory[i].total_user_files +
                       metrics.trajectory[i].total_virtual_files +
                       metrics.trajectory[i].total_codeword_load);
    return slope_per_slot(totals);
  };

  const double stable_slope = run_static(admit);
  const double unstable_slope = run_static(1.2 * admit);
  const bool ok = std::abs(stable_slope) < 1e-4 && unstable_slope > 1e-2;
  return {ok, fmt("boundary %.4f file/slot, inside slope %.2g, outside slope %.2g", boundary,
                  stable_slope, unstable_slope)};
}

// 8. Near max-min fairness equalizes symmetric users.
Outcome criterion_fairness_symmetry() {
  RunConfig config = scenario_config("sym_fading", 4);
  config.sys.fair.alpha = 10.0;
  config.horizon_slots = 100'000;
  config.seed = 3;
  const RunMetrics metrics = run(config);
  double lo = 1e30, hi = 0.0;
  for (double r : metrics.rate_files_per_slot) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double spread = (hi - lo) / mean_of(metrics.rate_files_per_slot);
  return {spread <= 0.03, fmt("per-user spread %.2f%%", 100.0 * spread)};
}

// 9. Repeated compare with a fixed seed produces bit-identical CSV.
Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ccfair_acceptance";
  fs::create_directories(dir);
  const std::string base = std::string(CCFAIR_CLI) + " compare --scenario two_class_fading --K 4" +
                           " --alpha 1 --seed 7 --horizon 20000 --out-dir " + dir.string();
  if (std::system((base + " --out a.csv > /dev/null").c_str()) != 0)
    return {false, "first compare invocation failed"};
  if (std::system((base + " --out b.csv > /dev/null").c_str()) != 0)
    return {false, "second compare invocation failed"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(dir / "a.csv");
  const std::string b = slurp(dir / "b.csv");
  const bool ok = !a.empty() && a == b;
  return {ok, fmt("%zu bytes, byte-identical: %s", a.size(), a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    Outcome (*fn)();
    double time_limit_s;  // 0 = no bound
  };
  const Entry entries[] = {
      {"unicast-opportunistic anchor 0.865", criterion_unicast_anchor, 10.0},
      {"standard-cc linearity in K", criterion_standard_cc_linearity, 30.0},
      {"wsr solver vs grid oracle", criterion_wsr_oracle, 60.0},
      {"normalization identities", criterion_normalization, 0.0},
      {"V sweep utility/queue tradeoff", criterion_v_tradeoff, 300.0},
      {"proposed dominates both baselines", criterion_dominance, 300.0},
      {"stability region witness", criterion_stability_witness, 0.0},
      {"fairness symmetry at alpha 10", criterion_fairness_symmetry, 0.0},
      {"deterministic compare output", criterion_determinism, 0.0},
  };

  int failures = 0;
  int id = 0;
  for (const Entry& entry : entries) {
    ++id;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.time_limit_s > 0.0 && seconds >= entry.time_limit_s) {
      outcome.ok = false;
      outcome.detail += fmt(" [over the %.0fs budget]", entry.time_limit_s);
    }
    std::printf("[%s] %d. %s — %s (%.1fs)\n", outcome.ok ? "PASS" : "FAIL", id, entry.name,
                outcome.detail.c_str(), seconds);
    if (!outcome.ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
