#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "jitterlab/jitter.hpp"
#include "jitterlab/rng.hpp"

namespace jitterlab {

// Random geometric graph: nodes linked iff their Euclidean distance is
// within `range`; every link carries a symmetric quality metric.
struct Topology {
  std::vector<std::array<double, 2>> positions;
  double range = 0.0;
  std::vector<std::vector<int>> neighbors;       // sorted node ids
  std::vector<std::vector<double>> link_metrics;  // parallel to neighbors

  int node_count() const { return static_cast<int>(positions.size()); }

  double metric(int u, int v) const {
    const auto& nbrs = neighbors[u];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
    if (it == nbrs.end() || *it != v)
      throw std::invalid_argument("no link between the given nodes");
    return link_metrics[u][static_cast<std::size_t>(it - nbrs.begin())];
  }

  bool linked(int u, int v) const {
    const auto& nbrs = neighbors[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }
};

// Builds the adjacency from the distance predicate; metrics default to 1.
inline Topology make_topology(std::vector<std::array<double, 2>> positions, double range) {
  Topology topo;
  topo.positions = std::move(positions);
  topo.range = range;
  const int n = topo.node_count();
  topo.neighbors.assign(n, {});
  topo.link_metrics.assign(n, {});
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double dx = topo.positions[u][0] - topo.positions[v][0];
      const double dy = topo.positions[u][1] - topo.positions[v][1];
      if (std::sqrt(dx * dx + dy * dy) <= range) {
        topo.neighbors[u].push_back(v);
        topo.link_metrics[u].push_back(1.0);
        topo.neighbors[v].push_back(u);
        topo.link_metrics[v].push_back(1.0);
      }
    }
  }
  return topo;
}

inline void set_link_metric(Topology& topo, int u, int v, double metric) {
  auto assign = [&](int a, int b) {
    auto& nbrs = topo.neighbors[a];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b);
    if (it == nbrs.end() || *it != b)
      throw std::invalid_argument("no link between the given nodes");
    topo.link_metrics[a][static_cast<std::size_t>(it - nbrs.begin())] = metric;
  };
  assign(u, v);
  assign(v, u);
}

struct SimConfig {
  int node_count = 100;
  double area_width = 1000.0;   // m
  double area_height = 1000.0;  // m
  double range = 250.0;         // m
  double metric_lo = 0.5;
  double metric_hi = 1.0;
  double duration_s = 100.0;
  int discovery_batch = 10;
  double batch_period_s = 2.0;
  double airtime_ms = 1.0;  // 0 disables collisions entirely
  JitterMechanism mechanism{MechanismKind::rfc5148, 250.0, 0.0, 40.0};
  std::uint64_t seed = kDefaultSeed;
};

inline void validate_sim_config(const SimConfig& config) {
  if (config.node_count < 1) throw std::invalid_argument("node_count must be >= 1");
  if (!(config.area_width > 0.0) || !(config.area_height > 0.0))
    throw std::invalid_argument("area dimensions must be positive");
  if (!(config.range > 0.0)) throw std::invalid_argument("range must be positive");
  if (!(config.metric_lo > 0.0 && config.metric_lo <= config.metric_hi &&
        config.metric_hi <= 1.0))
    throw std::invalid_argument("metric range must satisfy 0 < lo <= hi <= 1");
  if (!(config.duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (config.discovery_batch < 0) throw std::invalid_argument("discovery batch must be >= 0");
  if (!(config.batch_period_s > 0.0))
    throw std::invalid_argument("batch period must be positive");
  if (!(config.airtime_ms >= 0.0)) throw std::invalid_argument("airtime must be >= 0");
  validate_mechanism(config.mechanism);
}

// Positions i.i.d. uniform over the area, links by the range predicate,
// metrics i.i.d. uniform over [metric_lo, metric_hi].
inline Topology generate_topology(const SimConfig& config, SplitMix64& rng) {
  validate_sim_config(config);
  std::vector<std::array<double, 2>> positions(static_cast<std::size_t>(config.node_count));
  for (auto& p : positions) {
    p[0] = rng.uniform(0.0, config.area_width);
    p[1] = rng.uniform(0.0, config.area_height);
  }
  Topology topo = make_topology(std::move(positions), config.range);
  for (int u = 0; u < topo.node_count(); ++u) {
    for (std::size_t i = 0; i < topo.neighbors[u].size(); ++i) {
      const int v = topo.neighbors[u][i];
      if (v > u) {
        const double m = rng.uniform(config.metric_lo, config.metric_hi);
        topo.link_metrics[u][i] = m;
        set_link_metric(topo, v, u, m);
      }
    }
  }
  return topo;
}

struct DiscoveryResult {
  int discovery_id = 0;
  int source = 0;
  int destination = 0;
  double initiated_ms = 0.0;
  bool found = false;
  double route_metric = 0.0;      // mean link metric of the winning route
  double discovery_time_ms = 0.0;  // first arrival minus initiation
  int hop_count = 0;
  std::vector<int> path;  // source .. destination, when found
};

enum class SimEventKind { init, tx, rx, drop, dup };

inline const char* event_kind_label(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::init: return "init";
    case SimEventKind::tx: return "tx";
    case SimEventKind::rx: return "rx";
    case SimEventKind::drop: return "drop";
    case SimEventKind::dup: return "dup";
  }
  return "unknown";
}

struct EventRecord {
  double time_ms = 0.0;
  SimEventKind kind = SimEventKind::init;
  int node = 0;
  int discovery_id = 0;
};

struct SimStats {
  std::vector<DiscoveryResult> discoveries;
  long long collision_count = 0;
  std::size_t initiated = 0;
  std::size_t found = 0;
  std::vector<EventRecord> event_log;  // populated only when requested

  double mean_route_metric() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : discoveries)
      if (d.found) { sum += d.route_metric; ++n; }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  }

  double mean_discovery_time_ms() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& d : discoveries)
      if (d.found) { sum += d.discovery_time_ms; ++n; }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  }
};

struct FloodRequest {
  int source = 0;
  int destination = 0;
  double start_ms = 0.0;
};

namespace detail {

struct SimEvent {
  double time = 0.0;
  int node = 0;
  std::uint64_t seq = 0;
  bool is_rx = false;  // false: transmission start, true: reception complete
  int discovery = 0;
  int from = 0;
  double tx_start = 0.0;
  double metric_sum = 0.0;
  int hops = 0;
  std::uint64_t tx_id = 0;
  double link_metric = 0.0;
};

struct SimEventAfter {
  // min-heap on (time, node, seq)
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.node != b.node) return a.node > b.node;
    return a.seq > b.seq;
  }
};

struct AirEntry {
  double start = 0.0;
  std::uint64_t tx_id = 0;
};

}  // namespace detail

// Event-driven RREQ flooding on a shared timeline. Per discovery: the
// source transmits unjittered at its start time; each other node forwards
// the first successfully received copy after a jitter drawn from the metric
// of the link it arrived on, and ignores all later copies; the destination
// records the first copy and does not forward. A reception fails when any
// other transmission audible at the receiver overlaps the frame's airtime
// (counted once per spoiled reception); concurrent floods interfere.
inline SimStats run_floods(const Topology& topology, const JitterMechanism& mechanism,
                           const std::vector<FloodRequest>& requests, SplitMix64& rng,
                           double airtime_ms, bool record_events = false) {
  const int node_count = topology.node_count();
  const int discovery_count = static_cast<int>(requests.size());

  SimStats stats;
  stats.initiated = requests.size();
  stats.discoveries.resize(requests.size());

  // flat per-(discovery, node) state
  std::vector<char> received(static_cast<std::size_t>(discovery_count) * node_count, 0);
  std::vector<int> predecessor(static_cast<std::size_t>(discovery_count) * node_count, -1);
  auto flat = [node_count](int disc, int node) {
    return static_cast<std::size_t>(disc) * node_count + node;
  };

  std::vector<std::vector<detail::AirEntry>> audible(static_cast<std::size_t>(node_count));

  std::priority_queue<detail::SimEvent, std::vector<detail::SimEvent>, detail::SimEventAfter>
      queue;
  std::uint64_t next_seq = 0;

  for (int d = 0; d < discovery_count; ++d) {
    const FloodRequest& req = requests[d];
    if (req.source == req.destination || req.source < 0 || req.destination < 0 ||
        req.source >= node_count || req.destination >= node_count)
      throw std::invalid_argument("flood request needs distinct in-range source/destination");
    DiscoveryResult& result = stats.discoveries[static_cast<std::size_t>(d)];
    result.discovery_id = d;
    result.source = req.source;
    result.destination = req.destination;
    result.initiated_ms = req.start_ms;
    received[flat(d, req.source)] = 1;

    detail::SimEvent ev;
    ev.time = req.start_ms;
    ev.node = req.source;
    ev.seq = next_seq++;
    ev.discovery = d;
    queue.push(ev);
  }

  auto log_event = [&](double time, SimEventKind kind, int node, int disc) {
    if (record_events) stats.event_log.push_back({time, kind, node, disc});
  };

  while (!queue.empty()) {
    const detail::SimEvent ev = queue.top();
    queue.pop();

    if (!ev.is_rx) {
      // transmission start: occupy the air at every neighbor, deliver later
      const std::uint64_t tx_id = ev.seq;
      log_event(ev.time, ev.hops == 0 ? SimEventKind::init : SimEventKind::tx, ev.node,
                ev.discovery);
      const auto& nbrs = topology.neighbors[ev.node];
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const int v = nbrs[i];
        audible[static_cast<std::size_t>(v)].push_back({ev.time, tx_id});
        detail::SimEvent rx;
        rx.time = ev.time + airtime_ms;
        rx.node = v;
        rx.seq = next_seq++;
        rx.is_rx = true;
        rx.discovery = ev.discovery;
        rx.from = ev.node;
        rx.tx_start = ev.time;
        rx.metric_sum = ev.metric_sum;
        rx.hops = ev.hops;
        rx.tx_id = tx_id;
        rx.link_metric = topology.link_metrics[ev.node][i];
        queue.push(rx);
      }
      continue;
    }

    // reception complete: collision check over [tx_start, tx_start + airtime)
    const auto& air = audible[static_cast<std::size_t>(ev.node)];
    bool spoiled = false;
    if (airtime_ms > 0.0) {
      auto it = std::lower_bound(
          air.begin(), air.end(), ev.tx_start - airtime_ms,
          [](const detail::AirEntry& e, double t) { return e.start <= t; });
      for (; it != air.end() && it->start < ev.tx_start + airtime_ms; ++it) {
        if (it->tx_id != ev.tx_id) { spoiled = true; break; }
      }
    }
    if (spoiled) {
      ++stats.collision_count;
      log_event(ev.time, SimEventKind::drop, ev.node, ev.discovery);
      continue;
    }
    if (received[flat(ev.discovery, ev.node)]) {
      log_event(ev.time, SimEventKind::dup, ev.node, ev.discovery);
      continue;
    }

    received[flat(ev.discovery, ev.node)] = 1;
    predecessor[flat(ev.discovery, ev.node)] = ev.from;
    log_event(ev.time, SimEventKind::rx, ev.node, ev.discovery);

    const double metric_sum = ev.metric_sum + ev.link_metric;
    const int hops = ev.hops + 1;
    DiscoveryResult& result = stats.discoveries[static_cast<std::size_t>(ev.discovery)];

    if (ev.node == result.destination) {
      result.found = true;
      result.discovery_time_ms = ev.time - result.initiated_ms;
      result.route_metric = metric_sum / static_cast<double>(hops);
      result.hop_count = hops;
      for (int at = ev.node; at != -1; at = predecessor[flat(ev.discovery, at)])
        result.path.push_back(at);
      std::reverse(result.path.begin(), result.path.end());
      ++stats.found;
      continue;  // destination does not forward
    }

    detail::SimEvent tx;
    tx.time = ev.time + sample_jitter(mechanism, LinkMetric(ev.link_metric), rng);
    tx.node = ev.node;
    tx.seq = next_seq++;
    tx.discovery = ev.discovery;
    tx.metric_sum = metric_sum;
    tx.hops = hops;
    queue.push(tx);
  }

  return stats;
}

// Single discovery flood starting at t = 0.
inline SimStats run_discovery(const Topology& topology, const JitterMechanism& mechanism,
                              int source, int destination, SplitMix64& rng,
                              double airtime_ms, bool record_events = false) {
  return run_floods(topology, mechanism, {{source, destination, 0.0}}, rng, airtime_ms,
                    record_events);
}

// Batch schedule from the config: every batch_period, discovery_batch
// distinct sources each flood toward an independently drawn destination.
inline std::vector<FloodRequest> campaign_schedule(const SimConfig& config,
                                                   SplitMix64& rng) {
  std::vector<FloodRequest> requests;
  if (config.node_count < 2 || config.discovery_batch == 0) return requests;

  const int batch = std::min(config.discovery_batch, config.node_count);
  std::vector<int> ids(static_cast<std::size_t>(config.node_count));
  for (int i = 0; i < config.node_count; ++i) ids[static_cast<std::size_t>(i)] = i;

  for (std::size_t b = 0; static_cast<double>(b) * config.batch_period_s < config.duration_s;
       ++b) {
    const double start_ms = static_cast<double>(b) * config.batch_period_s * 1000.0;
    // partial Fisher-Yates for sources without replacement
    for (int k = 0; k < batch; ++k) {
      const std::size_t pick =
          static_cast<std::size_t>(k) +
          rng.uniform_index(static_cast<std::uint64_t>(config.node_count - k));
      std::swap(ids[static_cast<std::size_t>(k)], ids[pick]);
    }
    for (int k = 0; k < batch; ++k) {
      const int source = ids[static_cast<std::size_t>(k)];
      int dest = static_cast<int>(
          rng.uniform_index(static_cast<std::uint64_t>(config.node_count - 1)));
      if (dest >= source) ++dest;
      requests.push_back({source, dest, start_ms});
    }
  }
  return requests;
}

// One full campaign: topology, schedule, and every flood on one shared
// timeline. Topology and schedule streams do not depend on the mechanism,
// so different mechanisms can be compared on identical inputs.
inline SimStats run_campaign(const SimConfig& config, bool record_events = false) {
  validate_sim_config(config);
  SplitMix64 topo_rng(derive_seed(config.seed, 0xA1));
  SplitMix64 schedule_rng(derive_seed(config.seed, 0xA2));
  SplitMix64 jitter_rng(derive_seed(config.seed, 0xA3));

  const Topology topology = generate_topology(config, topo_rng);
  const std::vector<FloodRequest> requests = campaign_schedule(config, schedule_rng);
  return run_floods(topology, config.mechanism, requests, jitter_rng, config.airtime_ms,
                    record_events);
}

struct DensityCell {
  int node_count = 0;
  std::string mechanism;
  std::size_t repetitions = 0;
  double mean_route_metric = 0.0;
  double se_route_metric = 0.0;
  double mean_discovery_time_ms = 0.0;
  double se_discovery_time_ms = 0.0;
  double mean_collisions = 0.0;
  double se_collisions = 0.0;
  double found_ratio = 0.0;
};

struct CampaignRecord {
  int node_count = 0;
  std::string mechanism;
  std::size_t repetition = 0;
  SimStats stats;
};

struct DensitySweepResult {
  std::vector<DensityCell> cells;
  std::vector<CampaignRecord> campaigns;  // kept only when requested
};

namespace detail {

struct MeanSe {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

inline MeanSe mean_and_se(const std::vector<double>& values) {
  std::vector<double> finite;
  for (double v : values)
    if (std::isfinite(v)) finite.push_back(v);
  MeanSe out;
  if (finite.empty()) return out;
  double sum = 0.0;
  for (double v : finite) sum += v;
  out.mean = sum / static_cast<double>(finite.size());
  if (finite.size() > 1) {
    double ss = 0.0;
    for (double v : finite) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(finite.size() - 1) /
                       static_cast<double>(finite.size()));
  }
  return out;
}

}  // namespace detail

// Campaign seed for one sweep cell. The derivation ignores the mechanism,
// so every mechanism runs against the same topology and schedule.
inline SimConfig cell_config(const SimConfig& base, int node_count,
                             const JitterMechanism& mechanism, std::size_t repetition) {
  SimConfig config = base;
  config.node_count = node_count;
  config.mechanism = mechanism;
  config.seed = derive_seed(derive_seed(base.seed, static_cast<std::uint64_t>(node_count)),
                            repetition);
  return config;
}

// Campaign grid over node counts x mechanisms x repetitions. Repetition r
// at a given node count reuses one topology/schedule seed across all
// mechanisms; means and standard errors are taken across repetitions.
inline DensitySweepResult density_sweep(const SimConfig& base_config,
                                        const std::vector<int>& node_counts,
                                        const std::vector<JitterMechanism>& mechanisms,
                                        std::size_t repetitions,
                                        bool keep_campaigns = false) {
  if (node_counts.empty()) throw std::invalid_argument("density sweep needs node counts");
  if (mechanisms.empty()) throw std::invalid_argument("density sweep needs mechanisms");
  if (repetitions < 1) throw std::invalid_argument("density sweep needs repetitions >= 1");

  DensitySweepResult result;
  for (int node_count : node_counts) {
    for (const JitterMechanism& mech : mechanisms) {
      std::vector<double> metrics, times, collisions, found_ratios;
      for (std::size_t rep = 0; rep < repetitions; ++rep) {
        SimStats stats = run_campaign(cell_config(base_config, node_count, mech, rep));
        metrics.push_back(stats.mean_route_metric());
        times.push_back(stats.mean_discovery_time_ms());
        collisions.push_back(static_cast<double>(stats.collision_count));
        found_ratios.push_back(stats.initiated == 0
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : static_cast<double>(stats.found) /
                                         static_cast<double>(stats.initiated));
        if (keep_campaigns)
          result.campaigns.push_back(
              {node_count, mechanism_label(mech.kind), rep, std::move(stats)});
      }
      DensityCell cell;
      cell.node_count = node_count;
      cell.mechanism = mechanism_label(mech.kind);
      cell.repetitions = repetitions;
      auto m = detail::mean_and_se(metrics);
      cell.mean_route_metric = m.mean;
      cell.se_route_metric = m.se;
      auto t = detail::mean_and_se(times);
      cell.mean_discovery_time_ms = t.mean;
      cell.se_discovery_time_ms = t.se;
      auto c = detail::mean_and_se(collisions);
      cell.mean_collisions = c.mean;
      cell.se_collisions = c.se;
      cell.found_ratio = detail::mean_and_se(found_ratios).mean;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

}  // namespace jitterlab
