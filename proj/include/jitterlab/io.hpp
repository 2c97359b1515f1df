#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jitterlab/sim.hpp"
#include "jitterlab/sweep.hpp"

namespace jitterlab {

// Shortest round-trippable decimal form; identical inputs give identical bytes.
inline std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// blank field for NaN (e.g. a standard error with a single sample)
inline std::string format_optional(double v) {
  return std::isfinite(v) ? format_double(v) : std::string();
}

inline constexpr const char* kSweepCsvHeader =
    "mechanism,metric_difference,mean_inversion_probability,std_error,samples";

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << "\n";
  for (const SweepRow& row : rows) {
    out << row.mechanism << ',' << format_double(row.metric_difference) << ','
        << format_double(row.mean_inversion_probability) << ','
        << format_optional(row.std_error) << ',' << row.sample_count << "\n";
  }
}

inline nlohmann::json sweep_rows_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    nlohmann::json obj;
    obj["mechanism"] = row.mechanism;
    obj["metric_difference"] = row.metric_difference;
    obj["mean_inversion_probability"] = row.mean_inversion_probability;
    if (std::isfinite(row.std_error))
      obj["std_error"] = row.std_error;
    else
      obj["std_error"] = nullptr;
    obj["samples"] = row.sample_count;
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline constexpr const char* kDensityCsvHeader =
    "node_count,mechanism,repetitions,mean_route_metric,se_route_metric,"
    "mean_discovery_time_ms,se_discovery_time_ms,mean_collisions,se_collisions,found_ratio";

inline void write_density_csv(std::ostream& out, const std::vector<DensityCell>& cells) {
  out << kDensityCsvHeader << "\n";
  for (const DensityCell& cell : cells) {
    out << cell.node_count << ',' << cell.mechanism << ',' << cell.repetitions << ','
        << format_optional(cell.mean_route_metric) << ','
        << format_optional(cell.se_route_metric) << ','
        << format_optional(cell.mean_discovery_time_ms) << ','
        << format_optional(cell.se_discovery_time_ms) << ','
        << format_optional(cell.mean_collisions) << ','
        << format_optional(cell.se_collisions) << ','
        << format_optional(cell.found_ratio) << "\n";
  }
}

inline nlohmann::json density_cells_json(const std::vector<DensityCell>& cells) {
  auto opt = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const DensityCell& cell : cells) {
    nlohmann::json obj;
    obj["node_count"] = cell.node_count;
    obj["mechanism"] = cell.mechanism;
    obj["repetitions"] = cell.repetitions;
    obj["mean_route_metric"] = opt(cell.mean_route_metric);
    obj["se_route_metric"] = opt(cell.se_route_metric);
    obj["mean_discovery_time_ms"] = opt(cell.mean_discovery_time_ms);
    obj["se_discovery_time_ms"] = opt(cell.se_discovery_time_ms);
    obj["mean_collisions"] = opt(cell.mean_collisions);
    obj["se_collisions"] = opt(cell.se_collisions);
    obj["found_ratio"] = opt(cell.found_ratio);
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline constexpr const char* kDiscoveryCsvHeader =
    "node_count,mechanism,repetition,discovery_id,source,destination,found,"
    "route_metric,discovery_time_ms,hop_count";

inline void write_discoveries_csv(std::ostream& out,
                                  const std::vector<CampaignRecord>& campaigns) {
  out << kDiscoveryCsvHeader << "\n";
  for (const CampaignRecord& record : campaigns) {
    for (const DiscoveryResult& d : record.stats.discoveries) {
      out << record.node_count << ',' << record.mechanism << ',' << record.repetition
          << ',' << d.discovery_id << ',' << d.source << ',' << d.destination << ','
          << (d.found ? 1 : 0) << ',' << (d.found ? format_double(d.route_metric) : "")
          << ',' << (d.found ? format_double(d.discovery_time_ms) : "") << ','
          << (d.found ? std::to_string(d.hop_count) : "") << "\n";
    }
  }
}

inline void write_event_log(std::ostream& out, const std::vector<EventRecord>& log) {
  out << "time_ms,kind,node,discovery_id\n";
  for (const EventRecord& e : log) {
    out << format_double(e.time_ms) << ',' << event_kind_label(e.kind) << ',' << e.node
        << ',' << e.discovery_id << "\n";
  }
}

}  // namespace jitterlab
