#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "jitterlab/rng.hpp"
#include "jitterlab/uniform_sum.hpp"

namespace jitterlab {

// Link quality in (0, 1], 1 = best. Route metric is the mean over links.
struct LinkMetric {
  double value = 1.0;

  explicit LinkMetric(double v) : value(v) {
    if (!(v > 0.0) || !(v <= 1.0) || !std::isfinite(v))
      throw std::invalid_argument("link metric must lie in (0, 1]");
  }
};

struct RouteMetrics {
  std::vector<LinkMetric> links;

  explicit RouteMetrics(std::vector<LinkMetric> l) : links(std::move(l)) {
    if (links.empty()) throw std::invalid_argument("route needs at least one link metric");
  }

  static RouteMetrics from_values(const std::vector<double>& values) {
    std::vector<LinkMetric> links;
    links.reserve(values.size());
    for (double v : values) links.emplace_back(v);
    return RouteMetrics(std::move(links));
  }
};

enum class MechanismKind { rfc5148, deterministic, window, adaptive, bounded_adaptive };

// How a forwarder turns the incoming link's metric into a delay interval:
//   rfc5148           U(0, J_max)                      metric-blind
//   deterministic     exactly J_max                    no randomness
//   window            U(alpha * J_max, J_max)          metric-blind
//   adaptive          U((1-m) * J_max, J_max)
//   bounded_adaptive  U((1-m) * J_max, (1-m) * J_max + C)
// The bounded-adaptive upper bound may exceed J_max for poor links; the
// constant width C is the point of the mechanism, so it is not clamped.
struct JitterMechanism {
  MechanismKind kind = MechanismKind::rfc5148;
  double j_max = 0.0;  // ms
  double alpha = 0.0;  // window only, in [0, 1]
  double c = 0.0;      // bounded_adaptive only, in (0, j_max], ms
};

inline void validate_mechanism(const JitterMechanism& mech) {
  if (!(mech.j_max > 0.0) || !std::isfinite(mech.j_max))
    throw std::invalid_argument("j_max must be positive");
  if (mech.kind == MechanismKind::window && !(mech.alpha >= 0.0 && mech.alpha <= 1.0))
    throw std::invalid_argument("window jitter needs alpha in [0, 1]");
  if (mech.kind == MechanismKind::bounded_adaptive &&
      !(mech.c > 0.0 && mech.c <= mech.j_max))
    throw std::invalid_argument("bounded-adaptive jitter needs 0 < c <= j_max");
}

inline std::string mechanism_label(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::rfc5148: return "rfc5148";
    case MechanismKind::deterministic: return "deterministic";
    case MechanismKind::window: return "window";
    case MechanismKind::adaptive: return "adaptive";
    case MechanismKind::bounded_adaptive: return "bounded-adaptive";
  }
  return "unknown";
}

inline MechanismKind parse_mechanism_kind(const std::string& name) {
  if (name == "rfc5148") return MechanismKind::rfc5148;
  if (name == "deterministic") return MechanismKind::deterministic;
  if (name == "window") return MechanismKind::window;
  if (name == "adaptive") return MechanismKind::adaptive;
  if (name == "bounded-adaptive") return MechanismKind::bounded_adaptive;
  throw std::invalid_argument("unknown jitter mechanism: " + name);
}

// Delay interval a forwarder draws from; rejects degenerate intervals
// (deterministic, window with alpha = 1), which have no density.
inline UniformSpec jitter_interval(const JitterMechanism& mech, LinkMetric metric) {
  validate_mechanism(mech);
  UniformSpec spec;
  switch (mech.kind) {
    case MechanismKind::rfc5148:
      spec = {0.0, mech.j_max};
      break;
    case MechanismKind::deterministic:
      throw std::invalid_argument(
          "deterministic jitter is a fixed delay, not a distribution; "
          "it has no analytic interval");
    case MechanismKind::window:
      spec = {mech.alpha * mech.j_max, mech.j_max};
      break;
    case MechanismKind::adaptive:
      spec = {(1.0 - metric.value) * mech.j_max, mech.j_max};
      break;
    case MechanismKind::bounded_adaptive: {
      const double lower = (1.0 - metric.value) * mech.j_max;
      spec = {lower, lower + mech.c};
      break;
    }
  }
  validate_uniform_spec(spec);
  return spec;
}

inline RouteDelayModel route_delay_model(const JitterMechanism& mech,
                                         const RouteMetrics& metrics) {
  std::vector<UniformSpec> hops;
  hops.reserve(metrics.links.size());
  for (LinkMetric m : metrics.links) hops.push_back(jitter_interval(mech, m));
  return RouteDelayModel(std::move(hops));
}

inline double route_metric(const RouteMetrics& metrics) {
  double sum = 0.0;
  for (LinkMetric m : metrics.links) sum += m.value;
  return sum / static_cast<double>(metrics.links.size());
}

// Simulator-side draw; deterministic is a fixed J_max delay here.
inline double sample_jitter(const JitterMechanism& mech, LinkMetric metric,
                            SplitMix64& rng) {
  if (mech.kind == MechanismKind::deterministic) {
    validate_mechanism(mech);
    return mech.j_max;
  }
  UniformSpec spec = jitter_interval(mech, metric);
  return rng.uniform(spec.lower, spec.upper);
}

}  // namespace jitterlab
