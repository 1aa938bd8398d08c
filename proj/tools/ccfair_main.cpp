#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccfair/config.hpp"
#include "ccfair/report.hpp"
#include "ccfair/rng.hpp"

namespace {

using namespace ccfair;

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CCFAIR_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << content;
}

struct CommonOpts {
  std::string scenario = "det_two_class";
  std::string config_path;
  int users = 6;
  std::optional<double> alpha, v_param, power_db, power_linear, gamma_max, sigma_max, d_shift;
  std::optional<uint64_t> horizon, seed, sample_period;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--scenario", opts.scenario, "det_two_class | sym_fading | two_class_fading | custom");
  cmd->add_option("--config", opts.config_path, "config file (key = value lines); required for custom");
  cmd->add_option("--K,--users", opts.users, "number of users");
  cmd->add_option("--alpha", opts.alpha, "fairness exponent");
  cmd->add_option("--V", opts.v_param, "utility weight of the controller");
  cmd->add_option("--gamma-max", opts.gamma_max, "per-slot admission cap (files)");
  cmd->add_option("--sigma-max", opts.sigma_max, "per-subset combination cap");
  cmd->add_option("--d-shift", opts.d_shift, "utility domain shift");
  cmd->add_option("--horizon", opts.horizon, "slots to simulate");
  cmd->add_option("--seed", opts.seed, "run seed (all randomness derives from it)");
  cmd->add_option("--sample-period", opts.sample_period, "trajectory sampling period (0 = off)");
  auto* db = cmd->add_option("--power-db", opts.power_db, "power budget in dB");
  auto* lin = cmd->add_option("--power-linear", opts.power_linear, "power budget, linear");
  db->excludes(lin);
  cmd->add_option("--out-dir", opts.out_dir, "output directory (env CCFAIR_OUT_DIR)");
}

RunConfig build_config(const CommonOpts& opts) {
  RunConfig config;
  if (!opts.config_path.empty()) {
    config = load_config_file(opts.config_path);
  } else {
    if (opts.scenario == "custom")
      throw ConfigError("custom scenario needs --config");
    config = scenario_config(opts.scenario, opts.users);
  }
  if (opts.alpha) config.sys.fair.alpha = *opts.alpha;
  if (opts.v_param) config.sys.fair.v_param = *opts.v_param;
  if (opts.gamma_max) config.sys.fair.gamma_max_files = *opts.gamma_max;
  if (opts.sigma_max) config.sys.fair.sigma_max = *opts.sigma_max;
  if (opts.d_shift) config.sys.fair.d_shift = *opts.d_shift;
  if (opts.power_db) config.sys.power = std::pow(10.0, *opts.power_db / 10.0);
  if (opts.power_linear) config.sys.power = *opts.power_linear;
  if (opts.horizon) config.horizon_slots = *opts.horizon;
  if (opts.seed) config.seed = *opts.seed;
  if (opts.sample_period) config.metric_sample_period = *opts.sample_period;
  validate(config);
  return config;
}

int cmd_run(const CommonOpts& opts, const std::string& policy, const std::string& out_name,
            const std::string& trajectory_name, bool print_config) {
  RunConfig config = build_config(opts);
  if (!policy.empty()) config.policy = policy_from_string(policy);
  validate(config);
  if (print_config) std::cout << emit_config(config);

  const RunMetrics metrics = run(config);
  const std::string dir = output_dir(opts.out_dir);
  const std::string csv_path = dir + "/" + (out_name.empty() ? "run_" + config.scenario + ".csv" : out_name);
  write_file(csv_path, csv_document({metrics}));
  std::printf("wrote %s\n", csv_path.c_str());
  if (!trajectory_name.empty()) {
    const std::string json_path = dir + "/" + trajectory_name;
    write_file(json_path, trajectory_json(metrics));
    std::printf("wrote %s\n", json_path.c_str());
  }
  std::printf("scheme=%s sum_rate=%.6g files/slot utility=%.6g\n", to_string(config.policy).c_str(),
              metrics.sum_rate, metrics.utility);
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& policy, const std::string& axis_name,
              const std::vector<double>& values, const std::string& out_name) {
  RunConfig config = build_config(opts);
  if (!policy.empty()) config.policy = policy_from_string(policy);
  const SweepAxis axis = axis_from_string(axis_name);
  const std::vector<RunMetrics> results = sweep(config, axis, values);
  const std::string dir = output_dir(opts.out_dir);
  const std::string csv_path =
      dir + "/" + (out_name.empty() ? "sweep_" + axis_name + "_" + config.scenario + ".csv" : out_name);
  write_file(csv_path, csv_document(results));
  std::printf("wrote %s (%zu runs)\n", csv_path.c_str(), results.size());
  for (size_t i = 0; i < results.size(); ++i)
    std::printf("%s=%g sum_rate=%.6g utility=%.6g avg_queue=%.6g\n", axis_name.c_str(), values[i],
                results[i].sum_rate, results[i].utility, results[i].avg_total_queue);
  return 0;
}

int cmd_compare(const CommonOpts& opts, const std::string& out_name) {
  RunConfig config = build_config(opts);
  std::vector<RunMetrics> results;
  for (PolicyKind policy : {PolicyKind::proposed, PolicyKind::unicast_opp, PolicyKind::standard_cc}) {
    RunConfig c = config;
    c.policy = policy;
    results.push_back(run(c));
  }
  const std::string dir = output_dir(opts.out_dir);
  const std::string csv_path =
      dir + "/" + (out_name.empty() ? "compare_" + config.scenario + ".csv" : out_name);
  write_file(csv_path, csv_document(results));
  std::printf("wrote %s\n", csv_path.c_str());
  std::printf("%-12s %14s %14s\n", "scheme", "sum_rate", "utility");
  for (const RunMetrics& metrics : results)
    std::printf("%-12s %14.6g %14.6g\n", to_string(metrics.config.policy).c_str(), metrics.sum_rate,
                metrics.utility);
  return 0;
}

bool report(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

// Quick self-checks: closed-form identities and the solver against the grid
// oracle on random instances.
int cmd_check(uint64_t seed, int wsr_instances) {
  bool all = true;

  {
    bool ok = true;
    for (int users = 1; users <= 12 && ok; ++users) {
      for (int mi = 1; mi <= 9 && ok; ++mi) {
        const CacheParams cache{users, mi / 10.0, 1000.0};
        double total = 0.0, choose = 1.0;
        for (int s = 0; s <= users; ++s) {
          total += choose * subfile_size_bits(s, cache);
          choose = choose * (users - s) / (s + 1);
        }
        ok = ok && std::abs(total - cache.file_size_bits) <= 1e-12 * cache.file_size_bits;
        const double uncached = (1.0 - cache.memory_fraction) * cache.file_size_bits;
        for (int j = 1; j <= users; ++j) {
          double sum = 0.0, pick = 1.0;  // C(j-1, i-1)
          for (int i = 1; i <= j; ++i) {
            sum += pick * codeword_bits(j, i, cache);
            pick = pick * (j - i) / i;
          }
          ok = ok && std::abs(sum - uncached) <= 1e-12 * uncached;
        }
      }
    }
    all &= report("normalization identities", ok);
  }

  {
    bool ok = true;
    for (int i = 0; i < wsr_instances && ok; ++i) {
      const int users = 2 + static_cast<int>(counter_bits(seed, 900, i) % 3);
      ChannelState channel;
      std::vector<double> weights(size_t{1} << users, 0.0);
      for (int k = 0; k < users; ++k)
        channel.gains.push_back(counter_exponential(1.0, seed, 901 + i, k));
      for (size_t mask = 1; mask < weights.size(); ++mask)
        weights[mask] = counter_u01(seed, 902 + i, mask);
      const double budget = 10.0;
      const RateAllocation best = solve_wsr(weights, channel, budget);
      double lipschitz = 0.0;
      for (int k = 0; k < users; ++k) lipschitz += 2.0 * channel.gains[k] / std::log(2.0);
      const double tol = 1e-3 * std::max(1.0, best.weighted_sum);
      const double step = std::max(tol / (2.0 * lipschitz), budget / 40'000'000.0);
      const double oracle = wsr_bruteforce(weights, channel, budget, step);
      ok = std::abs(best.weighted_sum - oracle) <= tol;
    }
    all &= report("weighted sum rate solver vs grid oracle", ok);
  }

  {
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      FairnessConfig fair;
      fair.alpha = std::vector<double>{0.0, 0.5, 1.0, 2.0, 10.0}[counter_bits(seed, 910, i) % 5];
      fair.d_shift = 0.05 + counter_u01(seed, 911, i);
      fair.v_param = 1.0 + 99.0 * counter_u01(seed, 912, i);
      fair.gamma_max_files = 2.0;
      const double u = counter_u01(seed, 913, i) * 40.0;
      const double x_star = gamma_opt(u, fair);
      const double f_star = fair.v_param * g_utility(x_star, fair.alpha, fair.d_shift) - u * x_star;
      for (int g = 0; g <= 4000; ++g) {
        const double x = fair.gamma_max_files * g / 4000.0;
        const double f = fair.v_param * g_utility(x, fair.alpha, fair.d_shift) - u * x;
        if (f > f_star + 1e-3 * std::max(1.0, std::abs(f_star))) ok = false;
      }
    }
    all &= report("virtual arrival maximizer vs grid", ok);
  }

  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time simulator for fair online delivery of cached content over a "
               "fading broadcast channel"};
  app.require_subcommand(1);

  CommonOpts run_opts, sweep_opts, compare_opts;
  std::string run_policy = "proposed", run_out, run_traj;
  bool run_print_config = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("--policy", run_policy, "proposed | unicast_opp | standard_cc | static");
  run_cmd->add_option("--out", run_out, "CSV output file name");
  run_cmd->add_option("--trajectories", run_traj, "also write a trajectory JSON");
  run_cmd->add_flag("--print-config", run_print_config, "echo the resolved config");

  std::string sweep_policy = "proposed", sweep_axis = "K", sweep_out;
  std::vector<double> sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "independent runs along one axis");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--policy", sweep_policy, "scheme to sweep");
  sweep_cmd->add_option("--axis", sweep_axis, "K | V | alpha");
  sweep_cmd->add_option("--values", sweep_values, "axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", sweep_out, "CSV output file name");

  std::string compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "all three schemes on one scenario");
  add_common(compare_cmd, compare_opts);
  compare_cmd->add_option("--out", compare_out, "CSV output file name");

  uint64_t check_seed = 1;
  int check_instances = 200;
  auto* check_cmd = app.add_subcommand("check", "run oracle and invariant self-checks");
  check_cmd->add_option("--seed", check_seed, "seed for the random instances");
  check_cmd->add_option("--wsr-instances", check_instances, "number of solver-vs-oracle instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(run_opts, run_policy, run_out, run_traj, run_print_config);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_policy, sweep_axis, sweep_values, sweep_out);
    if (compare_cmd->parsed()) return cmd_compare(compare_opts, compare_out);
    if (check_cmd->parsed()) return cmd_check(check_seed, check_instances);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
