#include <catch2/catch_amalgamated.hpp>

#include "jitterlab/double_double.hpp"

using jitterlab::DoubleDouble;
using jitterlab::dd_factorial;
using jitterlab::dd_pow;

TEST_CASE("double-double addition keeps bits plain doubles lose") {
  DoubleDouble sum(1e16);
  sum += 1.0;
  sum -= 1e16;
  REQUIRE(sum.value() == 1.0);

  // alternating series that fully cancels
  DoubleDouble acc(0.0);
  for (int i = 0; i < 1000; ++i) {
    acc += 1e15 + i;
    acc -= 1e15 + i;
  }
  REQUIRE(acc.value() == 0.0);
}

TEST_CASE("double-double products and quotients round-trip") {
  DoubleDouble a(1.0 / 3.0, 1.0 / 3.0 * 0x1.0p-54);
  DoubleDouble b = a * 3.0;
  REQUIRE(std::fabs(b.value() - 1.0) < 1e-30);

  DoubleDouble x(7.125);
  DoubleDouble y(0.1);
  DoubleDouble q = (x * y) / y;
  REQUIRE(std::fabs(q.value() - 7.125) < 1e-29);
}

TEST_CASE("integer powers and factorials are exact") {
  REQUIRE(dd_pow(DoubleDouble(2.0), 0).value() == 1.0);
  REQUIRE(dd_pow(DoubleDouble(0.0), 0).value() == 1.0);
  REQUIRE(dd_pow(DoubleDouble(2.0), 10).value() == 1024.0);
  REQUIRE(dd_pow(DoubleDouble(3.0), 20).value() == 3486784401.0);

  // 20! = 2432902008176640000 does not fit a double mantissa but fits hi+lo
  DoubleDouble f = dd_factorial(20);
  REQUIRE(f.hi + f.lo == 2432902008176640000.0);
  DoubleDouble diff = f - 2432902008176640000.0;
  REQUIRE(diff.value() == 0.0);
}
