#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "jitterlab/inversion.hpp"
#include "jitterlab/jitter.hpp"
#include "jitterlab/rng.hpp"

namespace jitterlab {

// Mean delay-inversion probability versus route-metric difference, for
// equal-length routes under each mechanism.
struct SweepConfig {
  std::size_t hop_count = 6;
  double j_max = 100.0;  // ms
  double c = 30.0;       // ms, bounded-adaptive width
  double alpha = 0.0;    // window parameter, if window is swept
  std::size_t metric_samples = 1000;
  std::vector<double> difference_grid = {0.0,  0.05, 0.1,  0.15, 0.2, 0.25,
                                         0.3,  0.35, 0.4,  0.45, 0.5};
  std::uint64_t seed = kDefaultSeed;
  std::vector<MechanismKind> mechanisms = {MechanismKind::rfc5148, MechanismKind::adaptive,
                                           MechanismKind::bounded_adaptive};
};

inline void validate_sweep_config(const SweepConfig& config) {
  if (config.hop_count < 1) throw std::invalid_argument("sweep needs hop_count >= 1");
  if (config.metric_samples < 1) throw std::invalid_argument("sweep needs metric_samples >= 1");
  if (config.mechanisms.empty()) throw std::invalid_argument("sweep needs at least one mechanism");
  double prev = -1.0;
  for (double d : config.difference_grid) {
    if (!(d >= 0.0 && d < 1.0))
      throw std::invalid_argument("metric differences must lie in [0, 1)");
    if (!(d > prev)) throw std::invalid_argument("difference grid must be strictly increasing");
    prev = d;
  }
  if (config.difference_grid.empty()) throw std::invalid_argument("difference grid is empty");
}

struct SweepRow {
  std::string mechanism;
  double metric_difference = 0.0;
  double mean_inversion_probability = 0.0;
  double std_error = std::numeric_limits<double>::quiet_NaN();  // NaN when samples < 2
  std::size_t sample_count = 0;
  std::size_t failure_count = 0;
};

// Draws two equal-length metric tuples whose route averages differ by
// exactly target_difference (route1 the better). Each tuple is drawn
// i.i.d. uniform on (0,1] and shifted toward the pair's common center;
// draws that push any link metric out of (0,1] are rejected and retried.
inline std::pair<RouteMetrics, RouteMetrics> sample_metric_pair(std::size_t hop_count,
                                                                double target_difference,
                                                                SplitMix64& rng) {
  if (hop_count < 1) throw std::invalid_argument("metric pair needs hop_count >= 1");
  if (!(target_difference >= 0.0 && target_difference < 1.0))
    throw std::invalid_argument("target difference must lie in [0, 1)");

  constexpr int kMaxAttempts = 100000;
  std::vector<double> tuple1(hop_count), tuple2(hop_count);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    double mean1 = 0.0, mean2 = 0.0;
    for (std::size_t i = 0; i < hop_count; ++i) {
      tuple1[i] = 1.0 - rng.uniform();  // (0, 1]
      tuple2[i] = 1.0 - rng.uniform();
      mean1 += tuple1[i];
      mean2 += tuple2[i];
    }
    mean1 /= static_cast<double>(hop_count);
    mean2 /= static_cast<double>(hop_count);

    const double center = 0.5 * (mean1 + mean2);
    const double shift1 = center + 0.5 * target_difference - mean1;
    const double shift2 = center - 0.5 * target_difference - mean2;

    bool ok = true;
    for (std::size_t i = 0; i < hop_count && ok; ++i) {
      tuple1[i] += shift1;
      tuple2[i] += shift2;
      ok = tuple1[i] > 0.0 && tuple1[i] <= 1.0 && tuple2[i] > 0.0 && tuple2[i] <= 1.0;
    }
    if (ok)
      return {RouteMetrics::from_values(tuple1), RouteMetrics::from_values(tuple2)};
  }
  throw std::invalid_argument("target metric difference is infeasible for this hop count");
}

inline JitterMechanism sweep_mechanism(const SweepConfig& config, MechanismKind kind) {
  JitterMechanism mech;
  mech.kind = kind;
  mech.j_max = config.j_max;
  mech.alpha = config.alpha;
  mech.c = config.c;
  return mech;
}

// One row per (mechanism, grid point): the closed-form inversion
// probability averaged over metric_samples sampled route pairs. Each cell
// draws from a stream derived from (seed, mechanism index, grid index), so
// results are independent of evaluation order.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate_sweep_config(config);

  std::vector<SweepRow> rows;
  rows.reserve(config.mechanisms.size() * config.difference_grid.size());

  for (std::size_t mech_idx = 0; mech_idx < config.mechanisms.size(); ++mech_idx) {
    const JitterMechanism mech = sweep_mechanism(config, config.mechanisms[mech_idx]);
    const std::string label = mechanism_label(mech.kind);
    for (std::size_t grid_idx = 0; grid_idx < config.difference_grid.size(); ++grid_idx) {
      const double difference = config.difference_grid[grid_idx];
      SplitMix64 rng(derive_seed(derive_seed(config.seed, mech_idx), grid_idx));

      double sum = 0.0, sum_sq = 0.0;
      std::size_t count = 0, failures = 0;
      for (std::size_t s = 0; s < config.metric_samples; ++s) {
        auto [metrics1, metrics2] = sample_metric_pair(config.hop_count, difference, rng);
        try {
          InversionInstance instance{route_delay_model(mech, metrics1),
                                     route_delay_model(mech, metrics2)};
          const double p = inversion_probability_closed_form(instance).probability;
          sum += p;
          sum_sq += p * p;
          ++count;
        } catch (const precision_error&) {
          ++failures;
        }
      }

      SweepRow row;
      row.mechanism = label;
      row.metric_difference = difference;
      row.sample_count = count;
      row.failure_count = failures;
      if (count > 0) row.mean_inversion_probability = sum / static_cast<double>(count);
      if (count > 1) {
        const double mean = row.mean_inversion_probability;
        const double var =
            (sum_sq - static_cast<double>(count) * mean * mean) / static_cast<double>(count - 1);
        row.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace jitterlab
