#include "consim/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "consim/errors.hpp"
#include "consim/graph.hpp"
#include "consim/multiagent.hpp"
#include "consim/optimize.hpp"
#include "consim/spectral.hpp"
#include "consim/stochastic.hpp"
#include "consim/vec.hpp"
#include "format.hpp"

namespace consim {

namespace {

constexpr double kBoundSlack = 1e-9;

double now_ms_since(std::chrono::steady_clock::time_point t0) {
  const auto dt = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration<double, std::milli>(dt).count();
}

bool is_known_family(const std::string& f) {
  return f == "line" || f == "lollipop" || f == "grid" || f == "complete" ||
         f == "geometric";
}

double u_for(const ExperimentConfig& cfg, long n) {
  return cfg.u_mode == UModeKind::kExact ? static_cast<double>(n)
                                         : cfg.u_factor * static_cast<double>(n);
}

bool theorem_preconditions(const ExperimentConfig& cfg, long n) {
  return cfg.schedule == Schedule::kDefault && u_for(cfg, n) >= static_cast<double>(n);
}

// Builds the configured family at size n. Geometric draws retry
// seed, seed+1, ... until connected (at most 100 attempts) so that the
// protocols downstream always get a usable instance.
Graph build_graph(const ExperimentConfig& cfg, long n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("sizes: every n must be at least 2");
  const int ni = static_cast<int>(n);
  if (cfg.graph_family == "line") return line_graph(ni);
  if (cfg.graph_family == "lollipop") return lollipop_graph(ni);
  if (cfg.graph_family == "complete") return complete_graph(ni);
  if (cfg.graph_family == "grid") {
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (static_cast<long>(k) * k != n || k < 2)
      throw ConfigError("grid sizes must be perfect squares >= 4");
    return grid_2d(k);
  }
  if (cfg.graph_family == "geometric") {
    const double r = cfg.geo_radius > 0.0
                         ? cfg.geo_radius
                         : std::sqrt(16.0 * std::log(static_cast<double>(n)) /
                                     static_cast<double>(n));
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
      GeometricGraph gg = geometric_random_graph(ni, r, seed + attempt);
      if (gg.graph.connected()) return std::move(gg.graph);
    }
    throw ConfigError("geometric draws stayed disconnected for 100 seeds");
  }
  throw ConfigError("unknown graph family '" + cfg.graph_family + "'");
}

// Smallest t >= 1 with 2 eta^(t-1) dev1 < eps^2: the round at which the
// convergence theorem alone certifies the stopping rule.
long theorem_round_bound(double eta, double dev1, double eps) {
  const double target = eps * eps;
  if (2.0 * dev1 < target) return 1;
  long t = 1 + static_cast<long>(
                   std::ceil(std::log(target / (2.0 * dev1)) / std::log(eta)));
  if (t < 1) t = 1;
  while (2.0 * std::pow(eta, static_cast<double>(t - 1)) * dev1 >= target) ++t;
  while (t > 1 &&
         2.0 * std::pow(eta, static_cast<double>(t - 2)) * dev1 < target)
    --t;
  return t;
}

MomentumParams schedule_params(const ExperimentConfig& cfg, double U) {
  return cfg.schedule == Schedule::kDefault ? momentum_default(U)
                                            : momentum_grid(U, cfg.grid_c);
}

void cmd_consensus(const ExperimentConfig& cfg, RunRecord& rec) {
  rec.columns = {"n", "rounds", "theorem_round_bound", "wall_ms"};
  std::uint64_t size_index = 0;
  for (long n : cfg.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = build_graph(cfg, n, cfg.seed + size_index++);
    std::vector<double> x1(n, 0.0);
    x1[0] = 1.0;
    const double U = u_for(cfg, n);
    const MomentumParams p = schedule_params(cfg, U);
    const ConvergenceReport rep =
        run_consensus(g, x1, p, cfg.eps, StopNorm::kInf, cfg.max_iter);
    const long bound = theorem_round_bound(p.eta, rep.l2sq_dev[0], cfg.eps);
    if (theorem_preconditions(cfg, n) && rep.rounds > bound)
      rec.bound_violation = true;
    rec.rows.push_back({std::to_string(n), std::to_string(rep.rounds),
                        std::to_string(bound), detail::fmt_ms(now_ms_since(t0))});
  }
}

// w_i = (i mod 10) for the first half (1-based i), mirrored negative for
// the second half; the median of the multiset is 0.
std::vector<double> median_start_values(long n) {
  std::vector<double> w(n, 0.0);
  for (long i = 1; i <= n / 2; ++i) {
    w[i - 1] = static_cast<double>(i % 10);
    w[n / 2 + i - 1] = -w[i - 1];
  }
  return w;
}

void cmd_median(const ExperimentConfig& cfg, RunRecord& rec) {
  rec.columns = {"n", "T", "avg_abs_dev", "disp", "bound_disp", "wall_ms"};
  std::uint64_t size_index = 0;
  for (long n : cfg.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = build_graph(cfg, n, cfg.seed + size_index++);
    std::vector<double> w = cfg.objective.empty()
                                ? median_start_values(n)
                                : objective_start_values(cfg.objective);
    if (static_cast<long>(w.size()) != n)
      throw ConfigError("objective value list does not match size n");
    const ObjectiveSet obj = cfg.objective.empty()
                                 ? ObjectiveSet::absolute_loss(w)
                                 : parse_objective(cfg.objective);
    const long T = std::lround(cfg.t_mult * static_cast<double>(n));
    const double U = u_for(cfg, n);
    const OptReport rep = run_optimize(g, w, obj, U, T);
    const double avg_abs_dev =
        l1_deviation(rep.yhat, 0.0) / static_cast<double>(n);
    if (u_for(cfg, n) >= static_cast<double>(n) &&
        rep.disp > rep.bound_disp + kBoundSlack)
      rec.bound_violation = true;
    rec.rows.push_back({std::to_string(n), std::to_string(T),
                        detail::fmt_double(avg_abs_dev),
                        detail::fmt_double(rep.disp),
                        detail::fmt_double(rep.bound_disp),
                        detail::fmt_ms(now_ms_since(t0))});
  }
}

void cmd_spectrum(const ExperimentConfig& cfg, RunRecord& rec) {
  rec.columns = {"n", "lambda2", "lemma1_bound", "margin", "wall_ms"};
  std::uint64_t size_index = 0;
  for (long n : cfg.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = build_graph(cfg, n, cfg.seed + size_index++);
    const SpectralReport rep = spectral_report(lazy_metropolis(g));
    const double margin = rep.gap_bound - rep.lambda2;
    if (!(margin > 0.0)) rec.bound_violation = true;
    rec.rows.push_back({std::to_string(n), detail::fmt_double(rep.lambda2),
                        detail::fmt_double(rep.gap_bound),
                        detail::fmt_double(margin),
                        detail::fmt_ms(now_ms_since(t0))});
  }
}

void emit_trace_rows(RunRecord& rec, long n, const ConvergenceReport& rep,
                     double wall_ms) {
  for (std::size_t k = 0; k < rep.l2sq_dev.size(); ++k) {
    rec.rows.push_back({std::to_string(n), std::to_string(k + 1),
                        detail::fmt_double(rep.l2sq_dev[k]),
                        detail::fmt_double(rep.bound[k]),
                        std::to_string(rep.rounds), detail::fmt_ms(wall_ms)});
  }
}

bool trace_violates_bound(const ConvergenceReport& rep) {
  for (std::size_t k = 0; k < rep.l2sq_dev.size(); ++k)
    if (rep.l2sq_dev[k] > rep.bound[k] + kBoundSlack) return true;
  return false;
}

void maybe_write_trajectory(const ExperimentConfig& cfg,
                            const std::vector<Points>& traj) {
  if (cfg.traj.empty()) return;
  std::ofstream f(cfg.traj);
  if (!f) throw IoError("cannot open trajectory file: " + cfg.traj);
  write_trajectory_csv(traj, f);
}

void cmd_formation(const ExperimentConfig& cfg, RunRecord& rec) {
  rec.columns = {"n", "t", "dev_sq", "bound", "rounds", "wall_ms"};
  const long n = cfg.sizes[0];
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = build_graph(cfg, n, cfg.seed);

  std::ifstream f(cfg.formation_file);
  if (!f) throw IoError("cannot open formation file: " + cfg.formation_file);
  const FormationSpec spec = read_formation_file(f);

  Points p1(n, Point(spec.dim(), 0.0));
  if (cfg.start == "formation") p1 = target_formation(g, spec, p1);

  const double U = u_for(cfg, n);
  std::vector<Points> traj;
  const ConvergenceReport rep =
      run_formation(g, spec, p1, U, cfg.eps, cfg.max_iter,
                    cfg.traj.empty() ? nullptr : &traj);
  maybe_write_trajectory(cfg, traj);
  if (U >= static_cast<double>(n) && trace_violates_bound(rep))
    rec.bound_violation = true;
  emit_trace_rows(rec, n, rep, now_ms_since(t0));
}

void cmd_leader(const ExperimentConfig& cfg, RunRecord& rec) {
  rec.columns = {"n", "t", "dev_sq", "bound", "rounds", "wall_ms"};
  std::uint64_t size_index = 0;
  for (long n : cfg.sizes) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graph g = build_graph(cfg, n, cfg.seed + size_index++);
    LeaderConfig lc;
    for (long id : cfg.leaders) {
      if (id < 1 || id > n) throw ConfigError("leader id out of range for size n");
      lc.leaders.push_back(static_cast<int>(id - 1));
    }
    lc.v = {cfg.leader_v};
    lc.U = u_for(cfg, n);
    const Points x1(n, Point{cfg.x0});
    std::vector<Points> traj;
    const ConvergenceReport rep =
        run_leader_follow(g, lc, x1, cfg.eps, cfg.max_iter,
                          cfg.traj.empty() ? nullptr : &traj);
    maybe_write_trajectory(cfg, traj);
    if (lc.U >= static_cast<double>(n) && trace_violates_bound(rep))
      rec.bound_violation = true;
    emit_trace_rows(rec, n, rep, now_ms_since(t0));
  }
}

std::string join_longs(const std::vector<long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<long> split_longs(const std::string& text) {
  std::vector<long> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stol(token));
  }
  return out;
}

}  // namespace

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::kConsensus: return "consensus";
    case Subcommand::kMedian: return "median";
    case Subcommand::kFormation: return "formation";
    case Subcommand::kLeader: return "leader";
    case Subcommand::kSpectrum: return "spectrum";
  }
  return "?";
}

std::string u_mode_to_string(const ExperimentConfig& cfg) {
  if (cfg.u_mode == UModeKind::kExact) return "exact";
  return "factor:" + detail::fmt_double(cfg.u_factor);
}

std::string schedule_to_string(const ExperimentConfig& cfg) {
  if (cfg.schedule == Schedule::kDefault) return "default";
  return "grid:" + detail::fmt_double(cfg.grid_c);
}

void validate_config(const ExperimentConfig& cfg) {
  if (!is_known_family(cfg.graph_family))
    throw ConfigError("graph: unknown family '" + cfg.graph_family + "'");
  if (cfg.sizes.empty()) throw ConfigError("sizes: list must be nonempty");
  for (long n : cfg.sizes)
    if (n < 2) throw ConfigError("sizes: every n must be at least 2");
  if (!(cfg.eps > 0.0)) throw ConfigError("eps: must be positive");
  if (!(cfg.t_mult > 0.0)) throw ConfigError("t-mult: must be positive");
  if (cfg.u_mode == UModeKind::kFactor && !(cfg.u_factor > 0.0))
    throw ConfigError("u-mode: factor must be positive");
  if (cfg.schedule == Schedule::kGrid && !(cfg.grid_c > 0.0))
    throw ConfigError("schedule: grid constant must be positive");
  if (cfg.max_iter < 1) throw ConfigError("max-iter: must be at least 1");
  if (cfg.geo_radius < 0.0) throw ConfigError("graph: geometric radius must be positive");
  if (cfg.sub == Subcommand::kMedian) {
    for (long n : cfg.sizes)
      if (n % 2 != 0)
        throw ConfigError("sizes: median needs even n (mirrored halves)");
  }
  if (cfg.sub == Subcommand::kFormation) {
    if (cfg.formation_file.empty())
      throw ConfigError("formation: offset file path is required");
    if (cfg.sizes.size() != 1)
      throw ConfigError("formation: exactly one size (the file pins the node ids)");
    if (cfg.start != "origin" && cfg.start != "formation")
      throw ConfigError("start: must be 'origin' or 'formation'");
  }
  if (cfg.sub == Subcommand::kLeader) {
    if (cfg.leaders.empty()) throw ConfigError("leaders: list must be nonempty");
    for (long id : cfg.leaders)
      if (id < 1) throw ConfigError("leaders: ids are 1-based");
  }
}

RunRecord run_bench(const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.config = cfg;
  switch (cfg.sub) {
    case Subcommand::kConsensus: cmd_consensus(cfg, rec); break;
    case Subcommand::kMedian: cmd_median(cfg, rec); break;
    case Subcommand::kFormation: cmd_formation(cfg, rec); break;
    case Subcommand::kLeader: cmd_leader(cfg, rec); break;
    case Subcommand::kSpectrum: cmd_spectrum(cfg, rec); break;
  }
  return rec;
}

void write_record(const RunRecord& rec, std::ostream& out) {
  const ExperimentConfig& c = rec.config;
  out << "# subcommand=" << to_string(c.sub) << '\n';
  out << "# graph=" << c.graph_family;
  if (c.geo_radius > 0.0) out << ":r=" << detail::fmt_double(c.geo_radius);
  out << '\n';
  out << "# sizes=" << join_longs(c.sizes) << '\n';
  out << "# u_mode=" << u_mode_to_string(c) << '\n';
  out << "# eps=" << detail::fmt_double(c.eps) << '\n';
  out << "# t_mult=" << detail::fmt_double(c.t_mult) << '\n';
  out << "# seed=" << c.seed << '\n';
  out << "# schedule=" << schedule_to_string(c) << '\n';
  out << "# out=" << c.out << '\n';
  out << "# max_iter=" << c.max_iter << '\n';
  out << "# formation=" << c.formation_file << '\n';
  out << "# start=" << c.start << '\n';
  out << "# leaders=" << join_longs(c.leaders) << '\n';
  out << "# v=" << detail::fmt_double(c.leader_v) << '\n';
  out << "# x0=" << detail::fmt_double(c.x0) << '\n';
  out << "# objective=" << c.objective << '\n';
  out << "# traj=" << c.traj << '\n';
  for (std::size_t i = 0; i < rec.columns.size(); ++i)
    out << (i ? "," : "") << rec.columns[i];
  out << '\n';
  for (const auto& row : rec.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

ExperimentConfig parse_config_echo(std::istream& in) {
  ExperimentConfig cfg;
  cfg.sizes.clear();
  cfg.leaders.clear();
  std::map<std::string, std::string> kv;
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    std::string body = line.substr(1);
    if (!body.empty() && body[0] == ' ') body = body.substr(1);
    const auto eq = body.find('=');
    if (eq == std::string::npos) continue;
    kv[body.substr(0, eq)] = body.substr(eq + 1);
  }
  auto get = [&](const char* key) -> std::string {
    const auto it = kv.find(key);
    if (it == kv.end()) throw IoError(std::string("config echo: missing ") + key);
    return it->second;
  };
  const std::string sub = get("subcommand");
  if (sub == "consensus") cfg.sub = Subcommand::kConsensus;
  else if (sub == "median") cfg.sub = Subcommand::kMedian;
  else if (sub == "formation") cfg.sub = Subcommand::kFormation;
  else if (sub == "leader") cfg.sub = Subcommand::kLeader;
  else if (sub == "spectrum") cfg.sub = Subcommand::kSpectrum;
  else throw IoError("config echo: bad subcommand");
  std::string graph = get("graph");
  const auto colon = graph.find(":r=");
  if (colon != std::string::npos) {
    cfg.geo_radius = std::stod(graph.substr(colon + 3));
    graph = graph.substr(0, colon);
  }
  cfg.graph_family = graph;
  cfg.sizes = split_longs(get("sizes"));
  const std::string um = get("u_mode");
  if (um == "exact") {
    cfg.u_mode = UModeKind::kExact;
  } else if (um.rfind("factor:", 0) == 0) {
    cfg.u_mode = UModeKind::kFactor;
    cfg.u_factor = std::stod(um.substr(7));
  } else {
    throw IoError("config echo: bad u_mode");
  }
  cfg.eps = std::stod(get("eps"));
  cfg.t_mult = std::stod(get("t_mult"));
  cfg.seed = std::stoull(get("seed"));
  const std::string sched = get("schedule");
  if (sched == "default") {
    cfg.schedule = Schedule::kDefault;
  } else if (sched.rfind("grid:", 0) == 0) {
    cfg.schedule = Schedule::kGrid;
    cfg.grid_c = std::stod(sched.substr(5));
  } else {
    throw IoError("config echo: bad schedule");
  }
  cfg.out = get("out");
  cfg.max_iter = std::stol(get("max_iter"));
  cfg.formation_file = get("formation");
  cfg.start = get("start");
  cfg.leaders = split_longs(get("leaders"));
  cfg.leader_v = std::stod(get("v"));
  cfg.x0 = std::stod(get("x0"));
  cfg.objective = get("objective");
  cfg.traj = get("traj");
  return cfg;
}

int bench_main(const ExperimentConfig& cfg) {
  try {
    validate_config(cfg);
    const RunRecord rec = run_bench(cfg);
    if (cfg.out == "-" || cfg.out.empty()) {
      write_record(rec, std::cout);
    } else {
      std::ofstream f(cfg.out);
      if (!f) throw IoError("cannot open output file: " + cfg.out);
      write_record(rec, f);
    }
    return rec.bound_violation ? 3 : 0;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IncompleteSpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const MalformedSpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const FormationInvalidError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const TopologyError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace consim
