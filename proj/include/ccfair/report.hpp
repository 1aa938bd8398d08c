#pragma once

#include <string>
#include <vector>

#include "ccfair/sim_engine.hpp"

namespace ccfair {

// Column set is frozen; see docs/output_formats.md.
inline constexpr const char* kCsvHeader =
    "scheme,K,alpha,V,seed,user,avg_rate_files_per_slot,utility,avg_S,avg_Q_total,avg_U,B_est";

// One row per user. utility and B_est are run-level values repeated per row.
std::string csv_rows(const RunMetrics& metrics);

std::string csv_document(const std::vector<RunMetrics>& runs);

// Trajectory + per-user summary JSON for a single run.
std::string trajectory_json(const RunMetrics& metrics);

}  // namespace ccfair
