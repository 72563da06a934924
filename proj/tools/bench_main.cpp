// Command-line front end for the benchmark harness.
//
//   bench <subcommand> --graph <family[:params]> --sizes <list>
//         --u-mode <exact|factor:k> --eps <r> --t-mult <r> --seed <int>
//         --schedule <default|grid:c> --out <path> [...]
//
// Exit codes: 0 success, 2 config error, 3 bound violation, 4 I/O error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "consim/bench.hpp"
#include "consim/errors.hpp"

namespace {

struct RawOptions {
  std::string graph = "line";
  std::vector<long> sizes;
  std::string u_mode = "exact";
  double eps = 0.01;
  double t_mult = 4.0;
  std::uint64_t seed = 1;
  std::string schedule = "default";
  std::string out = "-";
  long max_iter = 1000000;
  std::string formation_file;
  std::string start = "origin";
  std::vector<long> leaders{1};
  double v = 0.0;
  double x0 = 1.0;
  std::string objective;
  std::string traj;
};

void add_common_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--graph", raw.graph,
                  "graph family: line|lollipop|grid|complete|geometric[:r=<radius>]");
  cmd->add_option("--sizes", raw.sizes, "node counts to sweep")
      ->delimiter(',')
      ->required();
  cmd->add_option("--u-mode", raw.u_mode, "node-count bound: exact|factor:<k>");
  cmd->add_option("--eps", raw.eps, "stopping threshold");
  cmd->add_option("--t-mult", raw.t_mult, "median rounds per node: T = t_mult*n");
  cmd->add_option("--seed", raw.seed, "seed for random graph families");
  cmd->add_option("--schedule", raw.schedule, "momentum schedule: default|grid:<c>");
  cmd->add_option("--out", raw.out, "output CSV path, '-' for stdout");
  cmd->add_option("--max-iter", raw.max_iter, "round cap per run");
}

// Throws consim::ConfigError on malformed composite flags.
consim::ExperimentConfig to_config(consim::Subcommand sub, const RawOptions& raw) {
  consim::ExperimentConfig cfg;
  cfg.sub = sub;
  std::string family = raw.graph;
  const auto params = family.find(':');
  if (params != std::string::npos) {
    const std::string tail = family.substr(params + 1);
    family = family.substr(0, params);
    if (tail.rfind("r=", 0) != 0)
      throw consim::ConfigError("graph: expected '<family>:r=<radius>'");
    try {
      cfg.geo_radius = std::stod(tail.substr(2));
    } catch (const std::exception&) {
      throw consim::ConfigError("graph: bad radius '" + tail.substr(2) + "'");
    }
  }
  cfg.graph_family = family;
  cfg.sizes = raw.sizes;
  if (raw.u_mode == "exact") {
    cfg.u_mode = consim::UModeKind::kExact;
  } else if (raw.u_mode.rfind("factor:", 0) == 0) {
    cfg.u_mode = consim::UModeKind::kFactor;
    try {
      cfg.u_factor = std::stod(raw.u_mode.substr(7));
    } catch (const std::exception&) {
      throw consim::ConfigError("u-mode: bad factor");
    }
  } else {
    throw consim::ConfigError("u-mode: expected 'exact' or 'factor:<k>'");
  }
  cfg.eps = raw.eps;
  cfg.t_mult = raw.t_mult;
  cfg.seed = raw.seed;
  if (raw.schedule == "default") {
    cfg.schedule = consim::Schedule::kDefault;
  } else if (raw.schedule.rfind("grid:", 0) == 0) {
    cfg.schedule = consim::Schedule::kGrid;
    try {
      cfg.grid_c = std::stod(raw.schedule.substr(5));
    } catch (const std::exception&) {
      throw consim::ConfigError("schedule: bad grid constant");
    }
  } else {
    throw consim::ConfigError("schedule: expected 'default' or 'grid:<c>'");
  }
  cfg.out = raw.out;
  cfg.max_iter = raw.max_iter;
  cfg.formation_file = raw.formation_file;
  cfg.start = raw.start;
  cfg.leaders = raw.leaders;
  cfg.leader_v = raw.v;
  cfg.x0 = raw.x0;
  cfg.objective = raw.objective;
  cfg.traj = raw.traj;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark harness for accelerated consensus protocols"};
  app.require_subcommand(1);
  RawOptions raw;

  CLI::App* consensus = app.add_subcommand(
      "consensus", "rounds until every node is within eps of the average");
  add_common_options(consensus, raw);

  CLI::App* median = app.add_subcommand(
      "median", "decentralized median computation via subgradient rounds");
  add_common_options(median, raw);
  median->add_option("--objective", raw.objective,
                     "override objective: abs:w=... or quad:w=...,box=lo:hi");

  CLI::App* formation = app.add_subcommand(
      "formation", "formation maintenance from an offset file");
  add_common_options(formation, raw);
  formation->add_option("--formation", raw.formation_file, "offset file path");
  formation->add_option("--start", raw.start, "initial positions: origin|formation");
  formation->add_option("--traj", raw.traj, "write position trajectory CSV here");

  CLI::App* leader = app.add_subcommand(
      "leader", "leader-following with a pinned target value");
  add_common_options(leader, raw);
  leader->add_option("--leaders", raw.leaders, "1-based leader ids")->delimiter(',');
  leader->add_option("--v", raw.v, "pinned leader value");
  leader->add_option("--x0", raw.x0, "non-leader start value");
  leader->add_option("--traj", raw.traj, "write trajectory CSV here");

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "second eigenvalue of the lazy Metropolis matrix vs its bound");
  add_common_options(spectrum, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  consim::Subcommand sub = consim::Subcommand::kConsensus;
  if (median->parsed()) sub = consim::Subcommand::kMedian;
  if (formation->parsed()) sub = consim::Subcommand::kFormation;
  if (leader->parsed()) sub = consim::Subcommand::kLeader;
  if (spectrum->parsed()) sub = consim::Subcommand::kSpectrum;

  try {
    return consim::bench_main(to_config(sub, raw));
  } catch (const consim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
}
