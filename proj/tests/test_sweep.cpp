#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "jitterlab/jitter.hpp"
#include "jitterlab/rng.hpp"
#include "jitterlab/sweep.hpp"

using namespace jitterlab;

TEST_CASE("metric pairs hit the target difference exactly") {
  SplitMix64 rng(55);
  for (double difference : {0.0, 0.1, 0.3, 0.5}) {
    for (std::size_t hops : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
      auto [r1, r2] = sample_metric_pair(hops, difference, rng);
      REQUIRE(r1.links.size() == hops);
      REQUIRE(r2.links.size() == hops);
      CHECK(route_metric(r1) - route_metric(r2) ==
            Catch::Approx(difference).margin(1e-12));
      for (const LinkMetric& m : r1.links) CHECK((m.value > 0.0 && m.value <= 1.0));
      for (const LinkMetric& m : r2.links) CHECK((m.value > 0.0 && m.value <= 1.0));
    }
  }

  SECTION("single hop arithmetic") {
    auto [r1, r2] = sample_metric_pair(1, 0.3, rng);
    CHECK(r1.links[0].value - r2.links[0].value == Catch::Approx(0.3).margin(1e-12));
  }

  SECTION("infeasible difference") {
    CHECK_THROWS_AS(sample_metric_pair(3, 0.999, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_metric_pair(3, 1.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_metric_pair(3, -0.1, rng), std::invalid_argument);
  }
}

TEST_CASE("sweep config validation") {
  SweepConfig config;
  CHECK_NOTHROW(validate_sweep_config(config));

  SweepConfig bad_grid = config;
  bad_grid.difference_grid = {0.2, 0.1};
  CHECK_THROWS_AS(validate_sweep_config(bad_grid), std::invalid_argument);
  bad_grid.difference_grid = {0.0, 1.0};
  CHECK_THROWS_AS(validate_sweep_config(bad_grid), std::invalid_argument);

  SweepConfig no_hops = config;
  no_hops.hop_count = 0;
  CHECK_THROWS_AS(validate_sweep_config(no_hops), std::invalid_argument);
}

TEST_CASE("small sweep reproduces the flat rfc5148 curve and the ordering") {
  SweepConfig config;
  config.hop_count = 4;
  config.metric_samples = 60;
  config.difference_grid = {0.0, 0.2, 0.4};
  config.seed = 9001;

  const auto rows = run_sweep(config);
  REQUIRE(rows.size() == 9);  // 3 mechanisms x 3 grid points

  double adaptive_at_02 = -1.0, bounded_at_02 = -1.0;
  for (const SweepRow& row : rows) {
    CHECK(row.sample_count == 60);
    CHECK(row.failure_count == 0);
    CHECK(row.mean_inversion_probability >= 0.0);
    CHECK(row.mean_inversion_probability <= 1.0);
    if (row.mechanism == "rfc5148")
      CHECK(row.mean_inversion_probability == Catch::Approx(0.5).margin(1e-9));
    if (row.metric_difference == 0.0)
      CHECK(row.mean_inversion_probability == Catch::Approx(0.5).margin(1e-9));
    if (row.metric_difference == 0.2 && row.mechanism == "adaptive")
      adaptive_at_02 = row.mean_inversion_probability;
    if (row.metric_difference == 0.2 && row.mechanism == "bounded-adaptive")
      bounded_at_02 = row.mean_inversion_probability;
  }
  REQUIRE(adaptive_at_02 >= 0.0);
  REQUIRE(bounded_at_02 >= 0.0);
  CHECK(bounded_at_02 < adaptive_at_02);
  CHECK(adaptive_at_02 < 0.5);
}

TEST_CASE("sweeps are deterministic in the seed") {
  SweepConfig config;
  config.hop_count = 3;
  config.metric_samples = 25;
  config.difference_grid = {0.0, 0.25};
  config.seed = 4242;

  const auto a = run_sweep(config);
  const auto b = run_sweep(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].mechanism == b[i].mechanism);
    CHECK(a[i].mean_inversion_probability == b[i].mean_inversion_probability);
    // bitwise: NaN std errors only when samples < 2
    CHECK((a[i].std_error == b[i].std_error ||
           (std::isnan(a[i].std_error) && std::isnan(b[i].std_error))));
  }

  SweepConfig single = config;
  single.metric_samples = 1;
  const auto rows = run_sweep(single);
  for (const SweepRow& row : rows) CHECK(std::isnan(row.std_error));
}
