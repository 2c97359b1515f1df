#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "jitterlab/hypergeometric.hpp"
#include "jitterlab/inversion.hpp"
#include "jitterlab/rng.hpp"
#include "oracles.hpp"

using namespace jitterlab;

TEST_CASE("terminating 2F1 known values") {
  CHECK(truncated_2f1(3, 1, 0.7) == 1.0);  // degree-0 polynomial
  CHECK(truncated_2f1(5, 4, 0.0) == 1.0);  // value at the origin
  // two-term series by hand: 1 + (2 * -1 / 3) * 1 = 1/3
  CHECK(oracles::truncated_2f1_binomial(1, 2, 1.0) == Catch::Approx(1.0 / 3.0));
  CHECK(truncated_2f1(1, 2, 1.0) == Catch::Approx(1.0 / 3.0).margin(1e-15));

  CHECK_THROWS_AS(truncated_2f1(0, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(truncated_2f1(1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("2F1 series matches the binomial-identity route") {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform_index(6));
    const int n = 1 + static_cast<int>(rng.uniform_index(6));
    const double z = rng.uniform(-2.0, 2.0);
    CHECK(truncated_2f1(m, n, z) ==
          Catch::Approx(oracles::truncated_2f1_binomial(m, n, z)).margin(1e-12));
  }
}

TEST_CASE("hypergeometric antiderivative equals the exact segment integral") {
  // cross-validates the printed bracket form against binomial-expansion
  // integration on random draws
  SplitMix64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(6));
    const int m = 1 + static_cast<int>(rng.uniform_index(6));
    const double shift1 = rng.uniform(0.0, 50.0);
    double shift2 = rng.uniform(0.0, 50.0);
    if (shift1 == shift2) shift2 += 1.0;
    double lo = rng.uniform(0.0, 100.0);
    double hi = rng.uniform(0.0, 100.0);
    if (lo > hi) std::swap(lo, hi);

    const double bracket = hypergeometric_antiderivative(n, m, shift1, shift2, hi) -
                           hypergeometric_antiderivative(n, m, shift1, shift2, lo);
    const double exact = segment_integral(n, m, shift1, shift2, lo, hi);
    const double scale = std::max(1.0, std::fabs(exact));
    CHECK(std::fabs(bracket - exact) <= 1e-9 * scale);
  }
}
