#include "ccfair/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ccfair {

namespace {

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_u64(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config: bad number '" + item + "' in " + key);
    }
  }
  return out;
}

std::vector<SubsetAmount> parse_mask_list(const std::string& text, const std::string& key) {
  std::vector<SubsetAmount> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const size_t colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("config: expected mask:value in " + key);
    try {
      out.push_back({static_cast<SubsetId>(std::stoul(item.substr(0, colon))),
                     std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ConfigError("config: bad mask:value '" + item + "' in " + key);
    }
  }
  return out;
}

std::string emit_mask_list(const std::vector<SubsetAmount>& items) {
  std::string out;
  for (const SubsetAmount& a : items) {
    if (!out.empty()) out += ';';
    out += std::to_string(a.mask) + ":" + fmt_double(a.value);
  }
  return out;
}

std::string emit_double_list(const std::vector<double>& items) {
  std::string out;
  for (double v : items) {
    if (!out.empty()) out += ',';
    out += fmt_double(v);
  }
  return out;
}

double get_double(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key);
  }
}

uint64_t get_u64(const std::map<std::string, std::string>& kv, const std::string& key, uint64_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + key);
  }
}

std::string get_str(const std::map<std::string, std::string>& kv, const std::string& key,
                    const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

const char* const kKnownKeys[] = {
    "alpha", "arrival_kind", "arrival_max_files", "arrival_mean_files_per_slot",
    "channel_kind", "channel_mean_gains", "channel_preset", "d_shift", "drain_after_horizon",
    "file_size_bits", "gamma_max_files", "horizon_slots", "memory_fraction",
    "metric_sample_period", "policy", "power_linear", "scenario", "seed", "sigma_max",
    "slot_channel_uses", "static_admission_files", "static_combine", "static_power_by_user",
    "static_rates_bits_per_use", "users", "v_param"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss{std::string(text)};
  std::string line;
  while (std::getline(ss, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) throw ConfigError("config: expected key = value, got '" + trimmed + "'");
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    bool known = false;
    for (const char* k : kKnownKeys)
      if (key == k) known = true;
    if (!known) throw ConfigError("config: unknown key '" + key + "'");
    if (!kv.emplace(key, value).second) throw ConfigError("config: duplicate key '" + key + "'");
  }

  RunConfig config;
  config.scenario = get_str(kv, "scenario", "custom");
  config.sys.users = static_cast<int>(get_u64(kv, "users", 2));
  config.sys.memory_fraction = get_double(kv, "memory_fraction", 0.6);
  config.sys.file_size_bits = get_double(kv, "file_size_bits", 1000.0);
  config.sys.slot_channel_uses = get_double(kv, "slot_channel_uses", 100.0);
  config.sys.power = get_double(kv, "power_linear", 10.0);
  config.sys.fair.alpha = get_double(kv, "alpha", 0.0);
  config.sys.fair.d_shift = get_double(kv, "d_shift", 0.1);
  config.sys.fair.v_param = get_double(kv, "v_param", 1000.0);
  config.sys.fair.gamma_max_files = get_double(kv, "gamma_max_files", 2.0);
  config.sys.fair.sigma_max = get_double(kv, "sigma_max", 2.0);

  const std::string channel_kind = get_str(kv, "channel_kind", "deterministic");
  if (channel_kind == "deterministic") config.channel.kind = ChannelKind::deterministic;
  else if (channel_kind == "iid_exponential") config.channel.kind = ChannelKind::iid_exponential;
  else throw ConfigError("config: unknown channel_kind '" + channel_kind + "'");

  const std::string preset = get_str(kv, "channel_preset", "custom");
  if (preset == "custom") config.channel.preset = GainPreset::custom;
  else if (preset == "symmetric") config.channel.preset = GainPreset::symmetric;
  else if (preset == "two_class") config.channel.preset = GainPreset::two_class;
  else throw ConfigError("config: unknown channel_preset '" + preset + "'");

  if (kv.count("channel_mean_gains")) {
    config.channel.mean_gains = parse_double_list(kv.at("channel_mean_gains"), "channel_mean_gains");
  } else if (config.channel.preset == GainPreset::symmetric) {
    config.channel.mean_gains = symmetric_means(config.sys.users);
  } else if (config.channel.preset == GainPreset::two_class) {
    config.channel.mean_gains = two_class_means(config.sys.users);
  } else {
    config.channel.mean_gains = symmetric_means(config.sys.users);
  }

  const std::string arrival_kind = get_str(kv, "arrival_kind", "infinite_backlog");
  if (arrival_kind == "infinite_backlog") config.arrivals.kind = ArrivalModel::Kind::infinite_backlog;
  else if (arrival_kind == "stochastic") config.arrivals.kind = ArrivalModel::Kind::stochastic;
  else throw ConfigError("config: unknown arrival_kind '" + arrival_kind + "'");
  config.arrivals.mean_files_per_slot = get_double(kv, "arrival_mean_files_per_slot", 0.5);
  config.arrivals.max_files = get_double(kv, "arrival_max_files", 2.0);

  config.policy = policy_from_string(get_str(kv, "policy", "proposed"));
  config.horizon_slots = get_u64(kv, "horizon_slots", 100'000);
  config.metric_sample_period = get_u64(kv, "metric_sample_period", 0);
  config.seed = get_u64(kv, "seed", 1);
  config.drain_after_horizon = get_u64(kv, "drain_after_horizon", 0) != 0;

  if (config.policy == PolicyKind::static_table) {
    StaticEntry entry;
    entry.gains = config.channel.mean_gains;
    if (config.channel.kind != ChannelKind::deterministic)
      throw ConfigError("config: static policy tables only cover deterministic channels");
    entry.admission_mean =
        parse_double_list(get_str(kv, "static_admission_files", ""), "static_admission_files");
    entry.combine_mean = parse_mask_list(get_str(kv, "static_combine", ""), "static_combine");
    StaticRateChoice choice;
    choice.probability = 1.0;
    for (const SubsetAmount& a :
         parse_mask_list(get_str(kv, "static_rates_bits_per_use", ""), "static_rates_bits_per_use"))
      choice.rates.push_back({a.mask, a.value});
    choice.power_by_user =
        parse_double_list(get_str(kv, "static_power_by_user", ""), "static_power_by_user");
    entry.rate_choices.push_back(std::move(choice));
    config.static_table = std::make_shared<StaticDecisionTable>(StaticDecisionTable{{std::move(entry)}});
  }

  validate(config);
  return config;
}

std::string emit_config(const RunConfig& config) {
  // Keys are emitted in sorted order; the resolved gains are always written.
  std::map<std::string, std::string> kv;
  kv["alpha"] = fmt_double(config.sys.fair.alpha);
  kv["arrival_kind"] =
      config.arrivals.kind == ArrivalModel::Kind::infinite_backlog ? "infinite_backlog" : "stochastic";
  kv["arrival_max_files"] = fmt_double(config.arrivals.max_files);
  kv["arrival_mean_files_per_slot"] = fmt_double(config.arrivals.mean_files_per_slot);
  kv["channel_kind"] =
      config.channel.kind == ChannelKind::deterministic ? "deterministic" : "iid_exponential";
  kv["channel_mean_gains"] = emit_double_list(config.channel.mean_gains);
  kv["channel_preset"] = config.channel.preset == GainPreset::custom      ? "custom"
                         : config.channel.preset == GainPreset::symmetric ? "symmetric"
                                                                          : "two_class";
  kv["d_shift"] = fmt_double(config.sys.fair.d_shift);
  kv["drain_after_horizon"] = config.drain_after_horizon ? "1" : "0";
  kv["file_size_bits"] = fmt_double(config.sys.file_size_bits);
  kv["gamma_max_files"] = fmt_double(config.sys.fair.gamma_max_files);
  kv["horizon_slots"] = fmt_u64(config.horizon_slots);
  kv["memory_fraction"] = fmt_double(config.sys.memory_fraction);
  kv["metric_sample_period"] = fmt_u64(config.metric_sample_period);
  kv["policy"] = to_string(config.policy);
  kv["power_linear"] = fmt_double(config.sys.power);
  kv["scenario"] = config.scenario;
  kv["seed"] = fmt_u64(config.seed);
  kv["sigma_max"] = fmt_double(config.sys.fair.sigma_max);
  kv["slot_channel_uses"] = fmt_double(config.sys.slot_channel_uses);
  kv["users"] = std::to_string(config.sys.users);
  kv["v_param"] = fmt_double(config.sys.fair.v_param);

  if (config.policy == PolicyKind::static_table && config.static_table &&
      !config.static_table->entries.empty()) {
    const StaticEntry& entry = config.static_table->entries.front();
    kv["static_admission_files"] = emit_double_list(entry.admission_mean);
    kv["static_combine"] = emit_mask_list(entry.combine_mean);
    std::vector<SubsetAmount> rates;
    for (const SubsetRate& r : entry.rate_choices.front().rates)
      rates.push_back({r.mask, r.bits_per_use});
    kv["static_rates_bits_per_use"] = emit_mask_list(rates);
    kv["static_power_by_user"] = emit_double_list(entry.rate_choices.front().power_by_user);
  }

  std::string out;
  for (const auto& [key, value] : kv) out += key + " = " + value + "\n";
  return out;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig scenario_config(const std::string& name, int users) {
  RunConfig config;
  config.scenario = name;
  config.sys.users = users;
  config.sys.memory_fraction = 0.6;
  config.sys.file_size_bits = 1000.0;
  config.sys.slot_channel_uses = 100.0;
  config.sys.power = 10.0;  // 10 dB
  if (name == "det_two_class") {
    config.channel = make_channel_model(ChannelKind::deterministic, GainPreset::two_class, users, 0);
  } else if (name == "sym_fading") {
    config.channel = make_channel_model(ChannelKind::iid_exponential, GainPreset::symmetric, users, 0);
  } else if (name == "two_class_fading") {
    config.channel = make_channel_model(ChannelKind::iid_exponential, GainPreset::two_class, users, 0);
  } else if (name == "custom") {
    config.channel = make_channel_model(ChannelKind::deterministic, GainPreset::symmetric, users, 0);
  } else {
    throw ConfigError("unknown scenario: " + name);
  }
  return config;
}

}  // namespace ccfair
