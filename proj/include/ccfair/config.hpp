#pragma once

#include <string>
#include <string_view>

#include "ccfair/sim_engine.hpp"

namespace ccfair {

// Flat key = value text, one setting per line, '#' comments. Keys carry their
// units (file_size_bits, slot_channel_uses, ...) and floats are emitted with
// 17 significant digits so emit -> parse is lossless.
RunConfig parse_config(std::string_view text);
std::string emit_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path);

// Scenario presets share m = 0.6, linear power 10 (10 dB), F = 1000 bits and
// T_slot = 100 channel uses.
RunConfig scenario_config(const std::string& name, int users);

}  // namespace ccfair
