#include "ccfair/subsets.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ccfair/errors.hpp"

namespace ccfair {

void validate(const CacheParams& params) {
  if (params.users < 1 || params.users > kMaxUsers)
    throw std::domain_error("cache params: users must be in [1, " + std::to_string(kMaxUsers) + "]");
  if (!(params.memory_fraction >= 0.0 && params.memory_fraction <= 1.0))
    throw std::domain_error("cache params: memory fraction must be in [0, 1]");
  if (!(params.file_size_bits > 0.0))
    throw std::domain_error("cache params: file size must be positive");
}

double subfile_size_bits(int cached_by, const CacheParams& params) {
  validate(params);
  if (cached_by < 0 || cached_by > params.users)
    throw std::domain_error("subfile_size_bits: cached_by out of [0, K]");
  const double m = params.memory_fraction;
  return std::pow(m, cached_by) * std::pow(1.0 - m, params.users - cached_by) * params.file_size_bits;
}

double codeword_bits(int combined, int receivers, const CacheParams& params) {
  validate(params);
  if (receivers < 1 || receivers > combined || combined > params.users)
    throw std::domain_error("codeword_bits: need 1 <= receivers <= combined <= K");
  const double m = params.memory_fraction;
  return std::pow(m, receivers - 1) * std::pow(1.0 - m, combined - receivers + 1) * params.file_size_bits;
}

double standard_cc_load_files(int users, double memory_fraction) {
  if (users < 1) throw std::domain_error("standard_cc_load_files: users must be >= 1");
  if (!(memory_fraction >= 0.0 && memory_fraction <= 1.0))
    throw std::domain_error("standard_cc_load_files: memory fraction must be in [0, 1]");
  const double m = memory_fraction;
  if (m == 0.0) return static_cast<double>(users);  // limit of the load as m -> 0
  if (m == 1.0) return 0.0;
  // (1/m)(1-m)(1-(1-m)^K), with the power expanded through expm1 so tiny m
  // does not cancel.
  return (1.0 - m) * (-std::expm1(users * std::log1p(-m))) / m;
}

std::vector<SubsetId> enumerate_subsets(int users) {
  if (users < 1 || users > kMaxUsers)
    throw ConfigError("enumerate_subsets: users must be in [1, " + std::to_string(kMaxUsers) + "]");
  const uint32_t n = uint32_t{1} << users;
  std::vector<SubsetId> out;
  out.reserve(n - 1);
  for (uint32_t mask = 1; mask < n; ++mask) out.push_back(mask);
  return out;
}

void subset_zeta_inplace(std::span<double> values, int users) {
  const size_t n = size_t{1} << users;
  if (values.size() != n) throw std::invalid_argument("subset_zeta_inplace: size must be 2^users");
  for (int b = 0; b < users; ++b) {
    const uint32_t bit = uint32_t{1} << b;
    for (uint32_t mask = 0; mask < n; ++mask)
      if (mask & bit) values[mask] += values[mask ^ bit];
  }
}

}  // namespace ccfair
