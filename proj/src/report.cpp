#include "ccfair/report.hpp"

#include <cinttypes>
#include <cstdio>

#include <json.hpp>

namespace ccfair {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_rows(const RunMetrics& metrics) {
  std::string out;
  const RunConfig& config = metrics.config;
  char head[160];
  std::snprintf(head, sizeof(head), "%s,%d,%s,%s,%" PRIu64, to_string(config.policy).c_str(),
                config.sys.users, num(config.sys.fair.alpha).c_str(),
                num(config.sys.fair.v_param).c_str(), config.seed);
  for (int k = 0; k < config.sys.users; ++k) {
    out += head;
    out += ',' + std::to_string(k);
    out += ',' + num(metrics.rate_files_per_slot[k]);
    out += ',' + num(metrics.utility);
    out += ',' + num(metrics.avg_user_files[k]);
    out += ',' + num(metrics.avg_codeword_load);
    out += ',' + num(metrics.avg_virtual_files[k]);
    out += ',' + num(metrics.b_estimate);
    out += '\n';
  }
  return out;
}

std::string csv_document(const std::vector<RunMetrics>& runs) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const RunMetrics& metrics : runs) out += csv_rows(metrics);
  return out;
}

std::string trajectory_json(const RunMetrics& metrics) {
  nlohmann::json doc;
  doc["scheme"] = to_string(metrics.config.policy);
  doc["scenario"] = metrics.config.scenario;
  doc["users"] = metrics.config.sys.users;
  doc["seed"] = metrics.config.seed;
  doc["sum_rate_files_per_slot"] = metrics.sum_rate;
  doc["utility"] = metrics.utility;
  doc["rate_files_per_slot"] = metrics.rate_files_per_slot;
  doc["offered_rate_files_per_slot"] = metrics.offered_rate_files_per_slot;
  doc["avg_user_files"] = metrics.avg_user_files;
  doc["avg_virtual_files"] = metrics.avg_virtual_files;
  doc["avg_codeword_load"] = metrics.avg_codeword_load;
  doc["avg_total_queue"] = metrics.avg_total_queue;
  doc["drift_constant_estimate"] = metrics.b_estimate;
  nlohmann::json samples = nlohmann::json::array();
  for (const TrajectorySample& s : metrics.trajectory) {
    samples.push_back({{"slot", s.slot},
                       {"user_files", s.total_user_files},
                       {"virtual_files", s.total_virtual_files},
                       {"codeword_load", s.total_codeword_load}});
  }
  doc["trajectory"] = std::move(samples);
  return doc.dump(2);
}

}  // namespace ccfair
