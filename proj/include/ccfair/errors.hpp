#pragma once

#include <stdexcept>

namespace ccfair {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ccfair
