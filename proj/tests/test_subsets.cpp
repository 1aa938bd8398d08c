#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ccfair/errors.hpp"
#include "ccfair/subsets.hpp"

using namespace ccfair;

namespace {

double choose(int n, int k) {
  double c = 1.0;
  for (int x = 0; x < k; ++x) c = c * (n - x) / (x + 1);
  return c;
}

}  // namespace

TEST_CASE("subfile sizes match direct evaluation") {
  const CacheParams cache{3, 0.6, 1000.0};
  CHECK(subfile_size_bits(0, cache) == doctest::Approx(64.0).epsilon(1e-12));
  CHECK(subfile_size_bits(1, cache) == doctest::Approx(96.0).epsilon(1e-12));
  const CacheParams full{3, 1.0, 1000.0};
  CHECK(subfile_size_bits(3, full) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(subfile_size_bits(4, cache), std::domain_error);
  CHECK_THROWS_AS(subfile_size_bits(-1, cache), std::domain_error);
}

TEST_CASE("subfile sizes over all subsets partition the file") {
  for (int users = 1; users <= 12; ++users) {
    for (int mi = 1; mi <= 9; ++mi) {
      const CacheParams cache{users, mi / 10.0, 1000.0};
      double total = 0.0;
      for (int s = 0; s <= users; ++s) total += choose(users, s) * subfile_size_bits(s, cache);
      CHECK(total == doctest::Approx(cache.file_size_bits).epsilon(1e-12));
    }
  }
}

TEST_CASE("codeword bits reproduce the worked queue inputs") {
  const CacheParams cache{3, 0.6, 1000.0};
  // One combined pair feeds the pair queue with m(1-m)F bits and each member's
  // solo queue with (1-m)^2 F bits.
  CHECK(codeword_bits(2, 2, cache) == doctest::Approx(240.0).epsilon(1e-12));
  CHECK(codeword_bits(2, 1, cache) == doctest::Approx(160.0).epsilon(1e-12));
  // A solo demand routes its whole uncached remainder to the solo queue.
  CHECK(codeword_bits(1, 1, cache) == doctest::Approx(400.0).epsilon(1e-12));
  const CacheParams uncached{3, 0.0, 1000.0};
  CHECK(codeword_bits(1, 1, uncached) == doctest::Approx(1000.0));
  CHECK_THROWS_AS(codeword_bits(1, 2, cache), std::domain_error);
  CHECK_THROWS_AS(codeword_bits(2, 0, cache), std::domain_error);
}

TEST_CASE("one combination delivers the uncached fraction to every member") {
  for (int users = 1; users <= 12; ++users) {
    for (int mi = 1; mi <= 9; ++mi) {
      const CacheParams cache{users, mi / 10.0, 1000.0};
      const double uncached = (1.0 - cache.memory_fraction) * cache.file_size_bits;
      for (int j = 1; j <= users; ++j) {
        double sum = 0.0;
        for (int i = 1; i <= j; ++i) sum += choose(j - 1, i - 1) * codeword_bits(j, i, cache);
        CHECK(sum == doctest::Approx(uncached).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("standard load formula") {
  CHECK(standard_cc_load_files(3, 0.6) == doctest::Approx((0.4 / 0.6) * (1.0 - 0.064)).epsilon(1e-12));
  CHECK(standard_cc_load_files(1, 0.3) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(standard_cc_load_files(200, 0.6) == doctest::Approx(0.4 / 0.6).epsilon(1e-6));
  CHECK(standard_cc_load_files(5, 0.0) == doctest::Approx(5.0));
  CHECK(standard_cc_load_files(5, 1.0) == doctest::Approx(0.0));
}

TEST_CASE("standard load equals the binomial sum of codeword sizes") {
  for (int users = 1; users <= 12; ++users) {
    for (int mi = 1; mi <= 9; ++mi) {
      const double m = mi / 10.0;
      double sum = 0.0;
      for (int s = 1; s <= users; ++s)
        sum += choose(users, s) * std::pow(m, s - 1) * std::pow(1.0 - m, users - s + 1);
      CHECK(sum == doctest::Approx(standard_cc_load_files(users, m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("subset enumeration is ascending and complete") {
  CHECK(enumerate_subsets(2) == std::vector<SubsetId>{1, 2, 3});
  CHECK(enumerate_subsets(1) == std::vector<SubsetId>{1});
  CHECK(enumerate_subsets(3).size() == 7);
  CHECK_THROWS_AS(enumerate_subsets(17), ConfigError);
  CHECK_THROWS_AS(enumerate_subsets(0), ConfigError);
}

TEST_CASE("zeta transform accumulates submask sums") {
  std::vector<double> v{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  subset_zeta_inplace(v, 3);
  CHECK(v[3] == doctest::Approx(7.0));    // {1,2}: 1+2+4
  CHECK(v[5] == doctest::Approx(25.0));   // {1,3}: 1+8+16
  CHECK(v[7] == doctest::Approx(127.0));  // everything
}
