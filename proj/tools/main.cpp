// Command-line front end: closed-form / quadrature / Monte Carlo delay
// inversion probabilities, the metric-difference sweep, and the flooding
// simulator. All commands are deterministic for a fixed seed (default 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jitterlab/inversion.hpp"
#include "jitterlab/io.hpp"
#include "jitterlab/jitter.hpp"
#include "jitterlab/sim.hpp"
#include "jitterlab/sweep.hpp"

namespace {

using namespace jitterlab;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;  // analytic failure: capacity, precision, disagreement
constexpr int kExitUsage = 2;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("could not parse " + what + ": '" + text + "'");
  }
}

// "a:b,c:d" -> per-hop intervals
std::vector<UniformSpec> parse_intervals(const std::string& text) {
  std::vector<UniformSpec> specs;
  for (const std::string& part : split(text, ',')) {
    auto bounds = split(part, ':');
    if (bounds.size() != 2)
      throw std::invalid_argument("interval must be lower:upper, got '" + part + "'");
    specs.push_back({parse_number(bounds[0], "interval bound"),
                     parse_number(bounds[1], "interval bound")});
  }
  if (specs.empty()) throw std::invalid_argument("empty interval list");
  return specs;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const std::string& part : split(text, ',')) values.push_back(parse_number(part, what));
  if (values.empty()) throw std::invalid_argument("empty " + what + " list");
  return values;
}

struct InstanceFlags {
  std::string r1_intervals, r2_intervals;
  std::string r1_metrics, r2_metrics;
  std::string mechanism;
  double j_max = 100.0;
  double alpha = 0.0;
  double c = 30.0;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
  cmd->add_option("--r1", flags.r1_intervals,
                  "route 1 hop intervals as lower:upper[,lower:upper...] (ms)");
  cmd->add_option("--r2", flags.r2_intervals, "route 2 hop intervals (ms)");
  cmd->add_option("--mech", flags.mechanism,
                  "jitter mechanism: rfc5148|deterministic|window|adaptive|bounded-adaptive");
  cmd->add_option("--r1-metrics", flags.r1_metrics, "route 1 link metrics, comma separated");
  cmd->add_option("--r2-metrics", flags.r2_metrics, "route 2 link metrics, comma separated");
  cmd->add_option("--j-max", flags.j_max, "maximum jitter delay J_max (ms)");
  cmd->add_option("--alpha", flags.alpha, "window mechanism lower fraction in [0,1]");
  cmd->add_option("--c", flags.c, "bounded-adaptive window width C (ms)");
}

RouteDelayModel build_route(const InstanceFlags& flags, const std::string& intervals,
                            const std::string& metrics, const char* which) {
  if (!intervals.empty()) return RouteDelayModel(parse_intervals(intervals));
  if (!metrics.empty()) {
    if (flags.mechanism.empty())
      throw std::invalid_argument("metric input needs --mech");
    JitterMechanism mech{parse_mechanism_kind(flags.mechanism), flags.j_max, flags.alpha,
                         flags.c};
    return route_delay_model(mech,
                             RouteMetrics::from_values(parse_number_list(metrics, "metric")));
  }
  throw std::invalid_argument(std::string("missing route input: give --") + which +
                              " or --" + which + "-metrics");
}

InversionInstance build_instance(const InstanceFlags& flags) {
  return {build_route(flags, flags.r1_intervals, flags.r1_metrics, "r1"),
          build_route(flags, flags.r2_intervals, flags.r2_metrics, "r2")};
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << contents;
}

int run_pdelay(const InstanceFlags& flags, const std::string& method, std::size_t samples,
               double abs_tol, std::uint64_t seed, const std::string& out_path,
               const std::string& format) {
  InversionInstance instance = build_instance(flags);
  InversionResult result;
  if (method == "closed-form")
    result = inversion_probability_closed_form(instance);
  else if (method == "quadrature")
    result = inversion_probability_quadrature(instance, abs_tol);
  else if (method == "monte-carlo")
    result = inversion_probability_montecarlo(instance, samples, seed);
  else
    throw std::invalid_argument("unknown method: " + method);

  std::cout << "probability " << format_double(result.probability) << "\n"
            << "method " << method_label(result.method) << "\n"
            << "error_estimate " << format_double(result.error_estimate) << "\n"
            << "terms " << result.terms << "\n";

  if (!out_path.empty()) {
    if (format == "csv") {
      std::ostringstream body;
      body << "method,probability,error_estimate,terms\n"
           << method_label(result.method) << ',' << format_double(result.probability) << ','
           << format_double(result.error_estimate) << ',' << result.terms << "\n";
      write_text_file(out_path, body.str());
    } else {
      nlohmann::json obj;
      obj["method"] = method_label(result.method);
      obj["probability"] = result.probability;
      obj["error_estimate"] = result.error_estimate;
      obj["terms"] = result.terms;
      write_text_file(out_path, obj.dump(2) + "\n");
    }
  }
  return kExitOk;
}

int run_mc_check(const InstanceFlags& flags, std::size_t samples, double tol_mult,
                 double abs_tol, double agree_tol, std::uint64_t seed) {
  InversionInstance instance = build_instance(flags);
  InversionResult cf = inversion_probability_closed_form(instance);
  InversionResult quad = inversion_probability_quadrature(instance, abs_tol);
  InversionResult mc = inversion_probability_montecarlo(instance, samples, seed);

  const double delta_quad = std::fabs(cf.probability - quad.probability);
  const double delta_mc = std::fabs(cf.probability - mc.probability);
  // binomial se from the closed-form p, floored at 1/N for the p=0/1 edges
  const double se = std::max(
      {mc.error_estimate,
       std::sqrt(cf.probability * (1.0 - cf.probability) / static_cast<double>(samples)),
       1.0 / static_cast<double>(samples)});
  const double mc_tol = tol_mult * se;

  std::cout << "closed_form " << format_double(cf.probability) << "\n"
            << "quadrature " << format_double(quad.probability) << "\n"
            << "monte_carlo " << format_double(mc.probability) << "\n"
            << "delta_quadrature " << format_double(delta_quad) << "\n"
            << "delta_montecarlo " << format_double(delta_mc) << "\n"
            << "mc_tolerance " << format_double(mc_tol) << "\n";

  const bool ok = delta_quad <= agree_tol && delta_mc <= mc_tol;
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

std::vector<MechanismKind> parse_mechanism_list(const std::string& text) {
  std::vector<MechanismKind> kinds;
  for (const std::string& part : split(text, ',')) kinds.push_back(parse_mechanism_kind(part));
  if (kinds.empty()) throw std::invalid_argument("empty mechanism list");
  return kinds;
}

int run_sweep_cmd(const SweepConfig& config, const std::string& out_path,
                  const std::string& format) {
  for (MechanismKind kind : config.mechanisms) {
    if (kind == MechanismKind::deterministic ||
        (kind == MechanismKind::window && config.alpha == 1.0))
      throw std::invalid_argument("mechanism '" + mechanism_label(kind) +
                                  "' is degenerate and cannot be swept analytically");
  }
  std::vector<SweepRow> rows = run_sweep(config);

  std::size_t failures = 0;
  for (const SweepRow& row : rows) failures += row.failure_count;
  if (failures > 0)
    std::cerr << "warning: " << failures << " sample evaluations failed and were excluded\n";

  std::ostringstream body;
  if (format == "csv")
    write_sweep_csv(body, rows);
  else
    body << sweep_rows_json(rows).dump(2) << "\n";
  write_text_file(out_path, body.str());

  std::cout << "wrote " << rows.size() << " rows (" << config.mechanisms.size()
            << " mechanisms x " << config.difference_grid.size() << " grid points, "
            << config.metric_samples << " samples each) to " << out_path << "\n";
  return kExitOk;
}

int run_simulate_cmd(const SimConfig& base, const std::vector<int>& node_counts,
                     const std::vector<MechanismKind>& kinds, std::size_t reps,
                     const std::string& out_path, const std::string& discoveries_path,
                     const std::string& event_log_path, const std::string& format) {
  std::vector<JitterMechanism> mechanisms;
  for (MechanismKind kind : kinds) {
    JitterMechanism mech = base.mechanism;
    mech.kind = kind;
    mechanisms.push_back(mech);
  }

  DensitySweepResult result =
      density_sweep(base, node_counts, mechanisms, reps, !discoveries_path.empty());

  std::ostringstream body;
  if (format == "csv")
    write_density_csv(body, result.cells);
  else
    body << density_cells_json(result.cells).dump(2) << "\n";
  write_text_file(out_path, body.str());

  if (!discoveries_path.empty()) {
    std::ostringstream discoveries;
    write_discoveries_csv(discoveries, result.campaigns);
    write_text_file(discoveries_path, discoveries.str());
  }

  if (!event_log_path.empty()) {
    if (node_counts.size() != 1 || mechanisms.size() != 1 || reps != 1)
      throw std::invalid_argument("--event-log needs exactly one node count, mechanism, "
                                  "and repetition");
    SimConfig cfg = cell_config(base, node_counts[0], mechanisms[0], 0);
    SimStats stats = run_campaign(cfg, true);
    std::ostringstream log;
    write_event_log(log, stats.event_log);
    write_text_file(event_log_path, log.str());
  }

  for (const DensityCell& cell : result.cells) {
    std::cout << cell.node_count << " nodes, " << cell.mechanism
              << ": route_metric=" << format_double(cell.mean_route_metric)
              << " discovery_time_ms=" << format_double(cell.mean_discovery_time_ms)
              << " collisions=" << format_double(cell.mean_collisions) << "\n";
  }
  std::cout << "wrote " << result.cells.size() << " cells to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-inversion analytics and jittered route-discovery simulation"};
  app.require_subcommand(1);

  // pdelay
  InstanceFlags pdelay_flags;
  std::string pdelay_method = "closed-form";
  std::size_t pdelay_samples = 1000000;
  double pdelay_abs_tol = 1e-9;
  std::uint64_t pdelay_seed = kDefaultSeed;
  std::string pdelay_out, pdelay_format = "csv";
  CLI::App* pdelay = app.add_subcommand(
      "pdelay", "Probability that route 1's summed jitter exceeds route 2's");
  add_instance_flags(pdelay, pdelay_flags);
  pdelay->add_option("--method", pdelay_method, "closed-form|quadrature|monte-carlo");
  pdelay->add_option("--samples", pdelay_samples, "Monte Carlo sample count");
  pdelay->add_option("--abs-tol", pdelay_abs_tol, "quadrature absolute tolerance");
  pdelay->add_option("--seed", pdelay_seed, "RNG seed (default 1)");
  pdelay->add_option("--out", pdelay_out, "optional output file");
  pdelay->add_option("--format", pdelay_format, "csv|json");

  // mc-check
  InstanceFlags check_flags;
  std::size_t check_samples = 1000000;
  double check_tol_mult = 4.0;
  double check_abs_tol = 1e-9;
  double check_agree_tol = 1e-6;
  std::uint64_t check_seed = kDefaultSeed;
  CLI::App* mc_check = app.add_subcommand(
      "mc-check", "Cross-check closed form against quadrature and Monte Carlo");
  add_instance_flags(mc_check, check_flags);
  mc_check->add_option("--samples", check_samples, "Monte Carlo sample count");
  mc_check->add_option("--tol-mult", check_tol_mult, "allowed Monte Carlo deviation in se units");
  mc_check->add_option("--abs-tol", check_abs_tol, "quadrature absolute tolerance");
  mc_check->add_option("--agree-tol", check_agree_tol,
                       "allowed |closed form - quadrature| difference");
  mc_check->add_option("--seed", check_seed, "RNG seed (default 1)");

  // sweep
  SweepConfig sweep_config;
  std::string sweep_grid, sweep_mechs, sweep_out = "sweep.csv", sweep_format = "csv";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Mean inversion probability vs route-metric difference per mechanism");
  sweep->set_config("--config");
  sweep->add_option("--hops", sweep_config.hop_count, "hops per route (default 6)");
  sweep->add_option("--j-max", sweep_config.j_max, "J_max in ms (default 100)");
  sweep->add_option("--c", sweep_config.c, "bounded-adaptive width C in ms (default 30)");
  sweep->add_option("--alpha", sweep_config.alpha, "window mechanism parameter");
  sweep->add_option("--samples", sweep_config.metric_samples,
                    "metric pairs per grid point (default 1000)");
  sweep->add_option("--grid", sweep_grid, "metric differences, comma separated");
  sweep->add_option("--mechs", sweep_mechs,
                    "mechanisms to sweep (default rfc5148,adaptive,bounded-adaptive)");
  sweep->add_option("--seed", sweep_config.seed, "RNG seed (default 1)");
  sweep->add_option("--out", sweep_out, "output file (default sweep.csv)");
  sweep->add_option("--format", sweep_format, "csv|json");

  // simulate
  SimConfig sim_config;
  std::string sim_nodes = "100", sim_mechs = "rfc5148,adaptive,bounded-adaptive";
  std::string sim_metrics, sim_out = "density.csv", sim_discoveries, sim_event_log;
  std::string sim_format = "csv";
  std::size_t sim_reps = 5;
  double sim_alpha = 0.0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Flooding campaigns over random topologies, per mechanism and density");
  simulate->set_config("--config");
  simulate->add_option("--nodes", sim_nodes, "node counts, comma separated (default 100)");
  simulate->add_option("--reps", sim_reps, "repetitions per cell (default 5)");
  simulate->add_option("--width", sim_config.area_width, "area width in m (default 1000)");
  simulate->add_option("--height", sim_config.area_height, "area height in m (default 1000)");
  simulate->add_option("--range", sim_config.range, "transmission range in m (default 250)");
  simulate->add_option("--j-max", sim_config.mechanism.j_max, "J_max in ms (default 250)");
  simulate->add_option("--c", sim_config.mechanism.c,
                       "bounded-adaptive width C in ms (default 40)");
  simulate->add_option("--alpha", sim_alpha, "window mechanism parameter");
  simulate->add_option("--metrics", sim_metrics, "link metric range lo:hi (default 0.5:1)");
  simulate->add_option("--duration", sim_config.duration_s, "campaign length in s (default 100)");
  simulate->add_option("--batch", sim_config.discovery_batch,
                       "discoveries per batch (default 10)");
  simulate->add_option("--period", sim_config.batch_period_s, "batch period in s (default 2)");
  simulate->add_option("--airtime", sim_config.airtime_ms,
                       "packet airtime in ms; 0 disables collisions (default 1)");
  simulate->add_option("--mechs", sim_mechs, "mechanisms, comma separated");
  simulate->add_option("--seed", sim_config.seed, "RNG seed (default 1)");
  simulate->add_option("--out", sim_out, "aggregate output file (default density.csv)");
  simulate->add_option("--discoveries-out", sim_discoveries, "per-discovery CSV output");
  simulate->add_option("--event-log", sim_event_log,
                       "event log output (single cell runs only)");
  simulate->add_option("--format", sim_format, "csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pdelay->parsed())
      return run_pdelay(pdelay_flags, pdelay_method, pdelay_samples, pdelay_abs_tol,
                        pdelay_seed, pdelay_out, pdelay_format);
    if (mc_check->parsed())
      return run_mc_check(check_flags, check_samples, check_tol_mult, check_abs_tol,
                          check_agree_tol, check_seed);
    if (sweep->parsed()) {
      if (!sweep_grid.empty())
        sweep_config.difference_grid = parse_number_list(sweep_grid, "grid value");
      if (!sweep_mechs.empty()) sweep_config.mechanisms = parse_mechanism_list(sweep_mechs);
      return run_sweep_cmd(sweep_config, sweep_out, sweep_format);
    }
    if (simulate->parsed()) {
      sim_config.mechanism.alpha = sim_alpha;
      if (!sim_metrics.empty()) {
        auto bounds = split(sim_metrics, ':');
        if (bounds.size() != 2)
          throw std::invalid_argument("--metrics must be lo:hi");
        sim_config.metric_lo = parse_number(bounds[0], "metric bound");
        sim_config.metric_hi = parse_number(bounds[1], "metric bound");
      }
      std::vector<int> node_counts;
      for (double v : parse_number_list(sim_nodes, "node count"))
        node_counts.push_back(static_cast<int>(v));
      return run_simulate_cmd(sim_config, node_counts, parse_mechanism_list(sim_mechs),
                              sim_reps, sim_out, sim_discoveries, sim_event_log, sim_format);
    }
  } catch (const capacity_error& e) {
    std::cerr << "error (capacity): " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const precision_error& e) {
    std::cerr << "error (precision): " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
