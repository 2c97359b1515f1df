// Integration checks against the built CLI binary: exit codes, output
// values, and byte-identical reruns. Usage: cli_tests <path-to-jitterlab>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

int g_failures = 0;

#define REQUIRE(cond, msg)                                                       \
  do {                                                                           \
    if (!(cond)) {                                                               \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg << "\n"; \
      ++g_failures;                                                              \
    }                                                                            \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run(const std::string& cli, const std::string& args) {
  const std::string out_path = "cli_test_stdout.tmp";
  const std::string command = "\"" + cli + "\" " + args + " > " + out_path + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = read_file(out_path);
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

double parse_value(const std::string& output, const std::string& key) {
  std::istringstream stream(output);
  std::string word;
  while (stream >> word) {
    if (word == key) {
      double v;
      if (stream >> v) return v;
    }
  }
  return -1e99;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: cli_tests <path-to-jitterlab-binary>\n";
    return 1;
  }
  const std::string cli = argv[1];

  // exit code 0 and the symmetric half
  RunResult half = run(cli, "pdelay --r1 0:100 --r2 0:100");
  REQUIRE(half.exit_code == 0, "symmetric pdelay should succeed");
  double p = parse_value(half.output, "probability");
  REQUIRE(std::abs(p - 0.5) < 1e-9, "symmetric probability should be 0.5, got " << p);

  // hand-integral instance
  RunResult quarter = run(cli, "pdelay --r1 0:2 --r2 1:2");
  REQUIRE(quarter.exit_code == 0, "pdelay 0:2 vs 1:2 should succeed");
  REQUIRE(std::abs(parse_value(quarter.output, "probability") - 0.25) < 1e-9,
          "0:2 vs 1:2 should give 0.25");

  // mechanism+metric input, the zero-difference six-hop case
  RunResult six = run(cli,
                      "pdelay --mech bounded-adaptive --j-max 100 --c 30 "
                      "--r1-metrics 1,1,1,1,1,1 --r2-metrics 1,1,1,1,1,1");
  REQUIRE(six.exit_code == 0, "six-hop bounded-adaptive pdelay should succeed");
  REQUIRE(std::abs(parse_value(six.output, "probability") - 0.5) < 1e-9,
          "equal metric routes should give 0.5");

  // alternative methods run and agree loosely
  RunResult quad = run(cli, "pdelay --r1 0:2 --r2 1:2 --method quadrature");
  REQUIRE(quad.exit_code == 0, "quadrature method should succeed");
  REQUIRE(std::abs(parse_value(quad.output, "probability") - 0.25) < 1e-6,
          "quadrature should match 0.25");
  RunResult mc = run(cli, "pdelay --r1 0:2 --r2 1:2 --method monte-carlo --samples 100000");
  REQUIRE(mc.exit_code == 0, "monte carlo method should succeed");
  REQUIRE(std::abs(parse_value(mc.output, "probability") - 0.25) < 0.01,
          "monte carlo should be near 0.25");

  // usage errors -> exit 2, distinct messages
  RunResult malformed = run(cli, "pdelay --r1 100:0 --r2 0:100");
  REQUIRE(malformed.exit_code == 2, "inverted interval should exit 2");
  REQUIRE(contains(malformed.output, "degenerate") || contains(malformed.output, "upper"),
          "inverted interval should explain the bound problem");

  RunResult degenerate =
      run(cli, "pdelay --mech deterministic --j-max 100 --r1-metrics 1 --r2-metrics 1");
  REQUIRE(degenerate.exit_code == 2, "deterministic analytic request should exit 2");
  REQUIRE(contains(degenerate.output, "deterministic"),
          "deterministic rejection should name the mechanism");

  RunResult missing = run(cli, "pdelay --r1 0:1");
  REQUIRE(missing.exit_code == 2, "missing route 2 should exit 2");

  RunResult no_sub = run(cli, "");
  REQUIRE(no_sub.exit_code == 2, "missing subcommand should exit 2");

  RunResult help = run(cli, "--help");
  REQUIRE(help.exit_code == 0, "--help should exit 0");

  // capacity -> exit 1
  std::string wide12 = "0:1";
  for (int i = 0; i < 11; ++i) wide12 += ",0:1";
  RunResult capacity = run(cli, "pdelay --r1 " + wide12 + " --r2 " + wide12);
  REQUIRE(capacity.exit_code == 1, "combined 24 hops should exit 1 (capacity)");
  REQUIRE(contains(capacity.output, "capacity"), "capacity error should say so");

  // mc-check agreement gate
  RunResult check = run(cli, "mc-check --r1 0:50 --r2 0:50 --samples 200000");
  REQUIRE(check.exit_code == 0, "identical-route mc-check should pass");
  REQUIRE(contains(check.output, "PASS"), "mc-check should print PASS");

  RunResult check_disjoint = run(cli, "mc-check --r1 0:1 --r2 2:3 --samples 50000");
  REQUIRE(check_disjoint.exit_code == 0, "disjoint mc-check should pass");

  // sweep: determinism and the flat rfc5148 curve
  const std::string sweep_args =
      "sweep --hops 2 --samples 5 --grid 0,0.2 --seed 7 --format csv --out ";
  RunResult sweep1 = run(cli, sweep_args + "cli_sweep_a.csv");
  REQUIRE(sweep1.exit_code == 0, "sweep should succeed");
  RunResult sweep2 = run(cli, sweep_args + "cli_sweep_b.csv");
  REQUIRE(sweep2.exit_code == 0, "sweep rerun should succeed");
  const std::string sweep_a = read_file("cli_sweep_a.csv");
  REQUIRE(!sweep_a.empty() && sweep_a == read_file("cli_sweep_b.csv"),
          "sweep reruns should be byte-identical");
  REQUIRE(contains(sweep_a, "mechanism,metric_difference,mean_inversion_probability"),
          "sweep csv should carry the documented header");
  {
    std::istringstream lines(sweep_a);
    std::string line;
    bool rfc_ok = false;
    while (std::getline(lines, line)) {
      if (line.rfind("rfc5148,0,", 0) == 0) {
        const std::string value = line.substr(10, line.find(',', 10) - 10);
        rfc_ok = std::abs(std::stod(value) - 0.5) < 1e-9;
      }
    }
    REQUIRE(rfc_ok, "rfc5148 at difference 0 should be 0.5 within 1e-9");
  }

  RunResult sweep_det = run(cli, "sweep --mechs deterministic --out cli_sweep_c.csv");
  REQUIRE(sweep_det.exit_code == 2, "deterministic sweep should exit 2");

  // simulate: determinism of aggregate and per-discovery outputs
  const std::string sim_args =
      "simulate --nodes 12 --reps 1 --width 300 --height 300 --range 120 "
      "--duration 4 --batch 2 --period 2 --j-max 50 --c 10 --seed 9 "
      "--mechs rfc5148,bounded-adaptive --discoveries-out ";
  RunResult sim1 = run(cli, sim_args + "cli_disc_a.csv --out cli_density_a.csv");
  REQUIRE(sim1.exit_code == 0, "simulate should succeed: " << sim1.output);
  RunResult sim2 = run(cli, sim_args + "cli_disc_b.csv --out cli_density_b.csv");
  REQUIRE(sim2.exit_code == 0, "simulate rerun should succeed");
  const std::string density_a = read_file("cli_density_a.csv");
  REQUIRE(!density_a.empty() && density_a == read_file("cli_density_b.csv"),
          "density csv reruns should be byte-identical");
  REQUIRE(read_file("cli_disc_a.csv") == read_file("cli_disc_b.csv"),
          "per-discovery csv reruns should be byte-identical");
  REQUIRE(contains(density_a, "node_count,mechanism,repetitions"),
          "density csv should carry the documented header");

  // event log dump for a single cell
  RunResult sim_log = run(cli,
                          "simulate --nodes 8 --reps 1 --width 250 --height 250 --range 120 "
                          "--duration 2 --batch 1 --j-max 20 --mechs rfc5148 --seed 4 "
                          "--out cli_density_c.csv --event-log cli_events.csv");
  REQUIRE(sim_log.exit_code == 0, "event-log run should succeed: " << sim_log.output);
  REQUIRE(contains(read_file("cli_events.csv"), "time_ms,kind,node,discovery_id"),
          "event log should carry its header");

  RunResult sim_log_multi = run(cli,
                                "simulate --nodes 8,10 --reps 1 --duration 2 --batch 1 "
                                "--out cli_density_d.csv --event-log cli_events2.csv");
  REQUIRE(sim_log_multi.exit_code == 2, "multi-cell event log request should exit 2");

  // json output mirrors the rows
  RunResult sweep_json =
      run(cli, "sweep --hops 2 --samples 3 --grid 0 --format json --out cli_sweep.json");
  REQUIRE(sweep_json.exit_code == 0, "json sweep should succeed");
  REQUIRE(contains(read_file("cli_sweep.json"), "\"mechanism\": \"rfc5148\""),
          "json sweep should contain mechanism objects");

  if (g_failures == 0) {
    std::cout << "cli_tests: all checks passed\n";
    return 0;
  }
  std::cerr << "cli_tests: " << g_failures << " failures\n";
  return 1;
}
