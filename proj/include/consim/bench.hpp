#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "consim/consensus.hpp"

namespace consim {

enum class Subcommand { kConsensus, kMedian, kFormation, kLeader, kSpectrum };

enum class UModeKind { kExact, kFactor };

// Full description of one benchmark invocation. Every field is echoed
// into the output header so a result file pins down exactly what produced
// it; parse_config_echo() reads the echo back into an equal config.
struct ExperimentConfig {
  Subcommand sub = Subcommand::kConsensus;

  // line | lollipop | grid | complete | geometric[:r=<radius>]. Sizes are
  // node counts for every family; grid sizes must be perfect squares.
  // Geometric graphs with no explicit radius use r^2 = 16 ln(n)/n.
  std::string graph_family = "line";
  double geo_radius = 0.0;  // 0 means the default radius rule

  std::vector<long> sizes;

  UModeKind u_mode = UModeKind::kExact;  // exact: U = n
  double u_factor = 1.0;                 // factor:k -> U = k*n

  double eps = 0.01;        // stopping threshold (infinity norm)
  double t_mult = 4.0;      // median: T = t_mult * n
  std::uint64_t seed = 1;
  Schedule schedule = Schedule::kDefault;
  double grid_c = 3.0;      // constant for the grid momentum schedule
  std::string out = "-";    // "-" writes to stdout
  long max_iter = 1000000;

  // Subcommand extras.
  std::string formation_file;   // formation
  std::string start = "origin";  // formation: origin | formation
  std::vector<long> leaders{1};  // leader, 1-based ids
  double leader_v = 0.0;         // leader target value
  double x0 = 1.0;               // leader non-leader start value
  std::string objective;         // median: optional abs:/quad: override
  std::string traj;              // formation/leader: optional trajectory CSV

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError with a field diagnostic on any bad combination.
void validate_config(const ExperimentConfig& cfg);

struct RunRecord {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // True when some emitted quantity exceeded its theorem-bound column while
  // the bound's preconditions held.
  bool bound_violation = false;
};

// Executes the configured sweep. Rows are buffered and emitted in the
// order of the sizes list, so output is deterministic regardless of how
// the runs are carried out.
RunRecord run_bench(const ExperimentConfig& cfg);

// '#'-prefixed "key=value" config echo, a column header row, then data
// rows. wall_ms is always the last column and is the only
// non-deterministic field.
void write_record(const RunRecord& rec, std::ostream& out);

ExperimentConfig parse_config_echo(std::istream& in);

std::string to_string(Subcommand s);
std::string u_mode_to_string(const ExperimentConfig& cfg);
std::string schedule_to_string(const ExperimentConfig& cfg);

// validate -> run -> write, mapping failures to exit codes:
// 0 success, 2 config error, 3 bound violation, 4 I/O error.
int bench_main(const ExperimentConfig& cfg);

}  // namespace consim
