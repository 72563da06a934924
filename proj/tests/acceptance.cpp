// Acceptance suite: one self-contained check per release criterion, each
// printed as a PASS/FAIL line. The process exits nonzero if any check
// fails. Run directly or through ctest (-R acceptance).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "consim/bench.hpp"
#include "consim/consensus.hpp"
#include "consim/graph.hpp"
#include "consim/multiagent.hpp"
#include "consim/optimize.hpp"
#include "consim/rng.hpp"
#include "consim/spectral.hpp"
#include "consim/stochastic.hpp"
#include "consim/vec.hpp"
#include "test_util.hpp"

using namespace consim;

namespace {

struct CheckFailure {
  std::string message;
};

void require(bool cond, const std::string& message) {
  if (!cond) throw CheckFailure{message};
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------- 1
// Step-wise decay of the squared deviation under the default schedule on
// random connected graphs.
void criterion_1() {
  SplitMix64 rng(20240901);
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 2 + static_cast<int>(rng.below(39));  // 2..40
    const Graph g = testing::random_connected_graph(n, rng.next());
    std::vector<double> x1(n);
    for (double& v : x1) v = rng.uniform(-1.0, 1.0);
    const MomentumParams p = momentum_default(static_cast<double>(n));
    const double xbar = mean(x1);
    const double dev1 = l2sq_deviation(x1, xbar);
    ConsensusState s = make_consensus_state(x1);
    for (long t = 1; t <= 500; ++t) {
      const double lhs = l2sq_deviation(s.y, xbar);
      const double rhs = 2.0 * std::pow(p.eta, static_cast<double>(t - 1)) * dev1;
      require(lhs <= rhs + 1e-9,
              "instance " + std::to_string(inst) + " n=" + std::to_string(n) +
                  " t=" + std::to_string(t) + ": " + fmt(lhs) + " > " + fmt(rhs));
      s = consensus_step(s, g, p);
    }
  }
}

// ---------------------------------------------------------------- 2
std::vector<Graph> gap_test_graphs(int max_n) {
  std::vector<Graph> graphs;
  for (int n : {2, 3, 4, 8, 16, 32, 50, 128, 200})
    if (n <= max_n) graphs.push_back(line_graph(n));
  for (int n : {4, 8, 16, 32, 50, 128, 200})
    if (n <= max_n) graphs.push_back(lollipop_graph(n));
  for (int k : {2, 3, 4, 5, 7, 10, 14})
    if (k * k <= max_n) graphs.push_back(grid_2d(k));
  for (int n : {2, 3, 8, 32, 50, 128, 200})
    if (n <= max_n) graphs.push_back(complete_graph(n));
  // 20 seeded random instances: half geometric (resampled to connected),
  // half tree-plus-edges
  SplitMix64 rng(555);
  for (int k = 0; k < 10; ++k) {
    const int n = 20 + static_cast<int>(rng.below(std::min(max_n, 200) - 19));
    const double r = std::sqrt(16.0 * std::log(n) / n);
    std::uint64_t seed = rng.next();
    for (;;) {
      GeometricGraph gg = geometric_random_graph(n, r, seed++);
      if (gg.graph.connected()) {
        graphs.push_back(std::move(gg.graph));
        break;
      }
    }
  }
  for (int k = 0; k < 10; ++k) {
    const int n = 10 + static_cast<int>(rng.below(std::min(max_n, 200) - 9));
    graphs.push_back(testing::random_connected_graph(n, rng.next()));
  }
  return graphs;
}

void criterion_2() {
  for (const Graph& g : gap_test_graphs(200)) {
    const SpectralReport rep = spectral_report(lazy_metropolis(g));
    const double n = static_cast<double>(g.node_count());
    const double bound = 1.0 - 1.0 / (71.0 * n * n);
    require(rep.lambda2 < bound,
            "n=" + std::to_string(g.node_count()) + ": lambda2 " +
                fmt(rep.lambda2) + " >= " + fmt(bound));
  }
}

// ---------------------------------------------------------------- 3
void criterion_3() {
  for (const Graph& g : gap_test_graphs(50)) {
    const int n = g.node_count();
    const MomentumParams p = momentum_default(static_cast<double>(n));
    const SpectralReport rep = spectral_report(lazy_metropolis(g));
    for (std::size_t k = 1; k < rep.eigenvalues.size(); ++k) {
      // tiny negative values are eigensolver residue of an exact zero
      const double lam = std::max(0.0, rep.eigenvalues[k]);
      for (long t = 1; t <= 200; ++t) {
        const auto q = block_iterate(lam, p, 1.0, t);
        const double rhs =
            2.0 * std::pow(p.eta, static_cast<double>(t - 1)) + 1e-9;
        require(q.second * q.second <= rhs,
                "n=" + std::to_string(n) + " lambda=" + fmt(lam) +
                    " t=" + std::to_string(t) + ": " + fmt(q.second * q.second) +
                    " > " + fmt(rhs));
      }
    }
  }
}

// ---------------------------------------------------------------- 4
void criterion_4() {
  SplitMix64 rng(777);
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 3 + static_cast<int>(rng.below(18));  // 3..20
    const Graph g = testing::random_connected_graph(n, rng.next());
    std::vector<double> x1(n);
    for (double& v : x1) v = rng.uniform(-1.0, 1.0);
    const MomentumParams p = momentum_default(static_cast<double>(n));
    ConsensusState s = make_consensus_state(x1);
    for (long t = 1; t <= 100; ++t) {
      const std::vector<double> ys = spectral_simulate(g, x1, p, t);
      for (int i = 0; i < n; ++i)
        require(std::abs(ys[i] - s.y[i]) <= 1e-8,
                "instance " + std::to_string(inst) + " t=" + std::to_string(t) +
                    " node " + std::to_string(i) + ": |" + fmt(ys[i]) + " - " +
                    fmt(s.y[i]) + "| > 1e-8");
      s = consensus_step(s, g, p);
    }
  }
}

// ---------------------------------------------------------------- 5
void criterion_5() {
  auto rounds_for = [](const Graph& g) {
    const int n = g.node_count();
    std::vector<double> x1(n, 0.0);
    x1[0] = 1.0;
    const ConvergenceReport rep = run_consensus(
        g, x1, momentum_default(static_cast<double>(n)), 0.01, StopNorm::kInf);
    require(rep.converged, "n=" + std::to_string(n) + " did not converge");
    return rep.rounds;
  };
  for (const char* family : {"line", "lollipop"}) {
    long prev = 0;
    for (int n : {64, 128, 256}) {
      const Graph g = std::string(family) == "line" ? line_graph(n)
                                                    : lollipop_graph(n);
      const long rounds = rounds_for(g);
      if (prev > 0)
        require(static_cast<double>(rounds) <= 2.5 * static_cast<double>(prev),
                std::string(family) + ": rounds(" + std::to_string(n) + ")=" +
                    std::to_string(rounds) + " > 2.5 * rounds(" +
                    std::to_string(n / 2) + ")=" + std::to_string(prev));
      prev = rounds;
    }
  }
}

// ---------------------------------------------------------------- 6
std::vector<double> mirrored_values(int n) {
  std::vector<double> w(n, 0.0);
  for (int i = 1; i <= n / 2; ++i) {
    w[i - 1] = static_cast<double>(i % 10);
    w[n / 2 + i - 1] = -w[i - 1];
  }
  return w;
}

void criterion_6() {
  for (const char* family : {"line", "lollipop"}) {
    for (int n : {100, 200}) {
      const Graph g = std::string(family) == "line" ? line_graph(n)
                                                    : lollipop_graph(n);
      const long T = 4L * n;
      const std::vector<double> w = mirrored_values(n);
      const ObjectiveSet obj = ObjectiveSet::absolute_loss(w);
      const OptReport rep = run_optimize(g, w, obj, static_cast<double>(n), T);
      const std::string tag = std::string(family) + " n=" + std::to_string(n);
      require(rep.disp <= rep.bound_disp + 1e-9,
              tag + ": disp " + fmt(rep.disp) + " > " + fmt(rep.bound_disp));
      require(rep.has_bound_err, tag + ": error bound missing");
      require(rep.err <= rep.bound_err + 1e-9,
              tag + ": err " + fmt(rep.err) + " > " + fmt(rep.bound_err));

      // untuned baseline under the same budget
      const double alpha_step = 1.0 / std::sqrt(static_cast<double>(n) * T);
      std::vector<double> x = w;
      std::vector<double> xsum(n, 0.0);
      for (long t = 0; t < T; ++t) {
        x = baseline_step(x, g, alpha_step, obj);
        for (int i = 0; i < n; ++i) xsum[i] += x[i];
      }
      for (int i = 0; i < n; ++i) xsum[i] /= static_cast<double>(T);
      const double accel_dev = l1_deviation(rep.yhat, 0.0) / n;
      const double base_dev = l1_deviation(xsum, 0.0) / n;
      require(accel_dev < base_dev, tag + ": accelerated avg dev " +
                                        fmt(accel_dev) + " not below baseline " +
                                        fmt(base_dev));
    }
  }
}

// ---------------------------------------------------------------- 7
void criterion_7() {
  struct Instance {
    Graph g;
    ObjectiveSet obj;
    std::vector<double> x1;
    long T;
  };
  std::vector<Instance> instances;
  {
    const int n = 50;
    const std::vector<double> w = mirrored_values(n);
    instances.push_back({line_graph(n), ObjectiveSet::absolute_loss(w), w, 200});
  }
  {
    const int n = 16;
    const std::vector<double> w = testing::random_vector(n, 99, -2.0, 2.0);
    instances.push_back({lollipop_graph(n),
                         ObjectiveSet::quadratic_loss(w, -4.0, 4.0),
                         testing::random_vector(n, 100, -2.0, 2.0), 300});
  }
  {
    const int n = 9;
    const std::vector<double> w = testing::random_vector(n, 101, -1.0, 1.0);
    instances.push_back({grid_2d(3), ObjectiveSet::absolute_loss(w),
                         testing::random_vector(n, 102, -1.0, 1.0), 250});
  }
  for (std::size_t inst = 0; inst < instances.size(); ++inst) {
    const auto& in = instances[inst];
    const int n = in.g.node_count();
    const MomentumParams p = momentum_default(static_cast<double>(n));
    const double beta =
        beta_step(in.obj.subgradient_bound(), static_cast<double>(n), in.T);
    OptState s = make_opt_state(in.x1);
    for (long t = 1; t <= in.T; ++t) {
      double gsum = 0.0;
      for (int i = 0; i < n; ++i) gsum += in.obj.subgradient(i, s.y[i]);
      const double expected = mean(s.x) - beta * gsum / n;
      s = optimize_step(s, in.g, p, beta, in.obj);
      const std::string tag =
          "instance " + std::to_string(inst) + " t=" + std::to_string(t);
      require(std::abs(mean(s.x) - expected) <= 1e-9,
              tag + ": mean recursion off by " + fmt(mean(s.x) - expected));
      require(std::abs(mean(s.x) - mean(s.y)) <= 1e-9,
              tag + ": mean(x) != mean(y)");
      require(std::abs(mean(s.y) - mean(s.z)) <= 1e-9,
              tag + ": mean(y) != mean(z)");
    }
  }
}

// ---------------------------------------------------------------- 8
void criterion_8() {
  SplitMix64 rng(4242);
  for (int inst = 0; inst < 8; ++inst) {
    const int n = 4 + static_cast<int>(rng.below(12));
    const int d = 1 + static_cast<int>(rng.below(3));
    const Graph g = testing::random_connected_graph(n, rng.next());
    // offsets from a realizable layout
    Points q(n, Point(d, 0.0));
    for (auto& pt : q)
      for (double& v : pt) v = rng.uniform(-2.0, 2.0);
    FormationSpec spec(d);
    for (auto [i, j] : g.edges()) {
      Point r(d);
      for (int k = 0; k < d; ++k) r[k] = q[j][k] - q[i][k];
      spec.set_offset(i, j, r);
    }
    Points p1(n, Point(d, 0.0));
    for (auto& pt : p1)
      for (double& v : pt) v = rng.uniform(-3.0, 3.0);

    const std::string tag = "instance " + std::to_string(inst);
    const Points pbar = target_formation(g, spec, p1);
    for (auto [i, j] : g.edges())
      for (int k = 0; k < d; ++k)
        require(std::abs(pbar[j][k] - pbar[i][k] - spec.offset(i, j)[k]) <= 1e-9,
                tag + ": target violates an offset");
    const Point cp = centroid(p1), cq = centroid(pbar);
    for (int k = 0; k < d; ++k)
      require(std::abs(cp[k] - cq[k]) <= 1e-12, tag + ": centroid moved");
    for (int anchor = 1; anchor < n; ++anchor) {
      const Points alt = target_formation(g, spec, p1, anchor);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k)
          require(std::abs(alt[i][k] - pbar[i][k]) <= 1e-12,
                  tag + ": anchor " + std::to_string(anchor) + " disagrees");
    }

    const double U = static_cast<double>(n);
    const ConvergenceReport rep = run_formation(g, spec, p1, U, 1e-7, 200000);
    require(rep.converged, tag + ": formation run did not converge");
    for (std::size_t k = 0; k < rep.l2sq_dev.size(); ++k)
      require(rep.l2sq_dev[k] <= rep.bound[k] + 1e-9,
              tag + ": bound violated at t=" + std::to_string(k + 1));
  }
}

// ---------------------------------------------------------------- 9
void criterion_9() {
  SplitMix64 rng(31337);
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 4 + static_cast<int>(rng.below(15));
    const Graph g = testing::random_connected_graph(n, rng.next());
    std::vector<int> leaders;
    for (int i = 0; i < n; ++i)
      if (rng.uniform() < 0.3) leaders.push_back(i);
    if (leaders.empty()) leaders.push_back(static_cast<int>(rng.below(n)));
    const double v = rng.uniform(-1.0, 1.0);
    const double U = static_cast<double>(n);
    const LeaderConfig cfg{leaders, {v}, U};

    Points x1(n, Point(1));
    for (auto& pt : x1) pt[0] = rng.uniform(-1.0, 1.0);

    const DoubledGraph dg = doubled_graph(g, leaders);
    require(dg.graph.connected(), "doubled graph disconnected");
    std::vector<char> is_leader(n, 0);
    for (int l : leaders) is_leader[l] = 1;
    std::vector<double> x1p(dg.graph.node_count(), 0.0);
    for (int i = 0; i < n; ++i) {
      if (is_leader[i]) continue;
      x1p[dg.map_a[i]] = x1[i][0] - v;
      x1p[dg.map_b[i]] = -(x1[i][0] - v);
    }

    LeaderState ls = make_leader_state(x1, g, cfg);
    ConsensusState cs = make_consensus_state(x1p);
    const MomentumParams pp = momentum_default(2.0 * U);
    const double eta = 1.0 - 1.0 / (18.0 * U);
    double dev1 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dd = ls.y[i][0] - v;
      dev1 += dd * dd;
    }
    const std::string tag = "instance " + std::to_string(inst);
    for (long t = 1; t <= 200; ++t) {
      double dev = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dd = ls.y[i][0] - v;
        dev += dd * dd;
        if (!is_leader[i]) {
          require(std::abs((ls.x[i][0] - v) - cs.x[dg.map_a[i]]) <= 1e-10,
                  tag + ": x mismatch at t=" + std::to_string(t));
          require(std::abs((ls.y[i][0] - v) - cs.y[dg.map_a[i]]) <= 1e-10,
                  tag + ": y mismatch at t=" + std::to_string(t));
        }
      }
      const double rhs =
          2.0 * std::pow(eta, static_cast<double>(t - 1)) * dev1 + 1e-9;
      require(dev <= rhs, tag + ": 18U bound violated at t=" + std::to_string(t));
      ls = leader_step(ls, g, cfg);
      cs = consensus_step(cs, dg.graph, pp);
    }
  }
}

// ---------------------------------------------------------------- 10
void criterion_10() {
  const int n = 500;
  const double r = std::sqrt(16.0 * std::log(n) / n);
  int connected = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
    if (geometric_random_graph(n, r, seed).graph.connected()) ++connected;
  require(connected >= 48, "only " + std::to_string(connected) +
                               "/50 draws connected at the c=2 radius");
}

// ---------------------------------------------------------------- 11
#ifndef BENCH_BIN
#error "BENCH_BIN must point at the bench executable"
#endif

std::string deterministic_section(const std::string& csv) {
  std::stringstream in(csv);
  std::string line, out;
  bool in_data = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      out += line + '\n';
      continue;
    }
    if (!in_data) {
      in_data = true;
      out += line + '\n';
      continue;
    }
    out += line.substr(0, line.rfind(',')) + '\n';
  }
  return out;
}

void criterion_11() {
  const std::string out =
      (std::filesystem::temp_directory_path() / "consim_acceptance_out.csv").string();
  const std::vector<std::string> invocations = {
      std::string(BENCH_BIN) + " consensus --graph line --sizes 8,16,32 --seed 7 --out " + out,
      std::string(BENCH_BIN) + " median --graph lollipop --sizes 16 --seed 7 --out " + out,
      std::string(BENCH_BIN) + " spectrum --graph geometric --sizes 24 --seed 9 --out " + out,
  };
  for (const std::string& cmd : invocations) {
    auto slurp = [&] {
      std::stringstream buf;
      buf << std::ifstream(out).rdbuf();
      return buf.str();
    };
    require(std::system(cmd.c_str()) == 0, "bench run failed: " + cmd);
    const std::string first = slurp();
    require(std::system(cmd.c_str()) == 0, "bench rerun failed: " + cmd);
    const std::string second = slurp();
    require(!first.empty(), "bench produced no output");
    require(deterministic_section(first) == deterministic_section(second),
            "deterministic section differs between identical runs");
  }
  std::remove(out.c_str());
}

struct Criterion {
  int id;
  const char* name;
  std::function<void()> fn;
  double time_limit_s;  // 0 = none stated
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "step-wise decay bound on 100 random graphs (U=n, t<=500)", criterion_1, 30.0},
      {2, "second-eigenvalue gap below 1 - 1/(71 n^2) on all families", criterion_2, 60.0},
      {3, "2x2 block decay within 2 r^2 (1 - 1/(9n))^(t-1), all eigenvalues", criterion_3, 0.0},
      {4, "spectral reconstruction matches the direct protocol to 1e-8", criterion_4, 0.0},
      {5, "rounds-to-1/100 grow subquadratically when n doubles", criterion_5, 120.0},
      {6, "median experiment meets dispersion/error bounds and beats baseline", criterion_6, 120.0},
      {7, "per-round mean recursion and three-iterate mean equality", criterion_7, 0.0},
      {8, "formation: target validity, anchor independence, decay bound", criterion_8, 0.0},
      {9, "leader-following equals doubled-graph consensus; 18U bound", criterion_9, 0.0},
      {10, "geometric graphs at the c=2 radius are connected (>=48/50)", criterion_10, 0.0},
      {11, "bench reruns are byte-identical in deterministic sections", criterion_11, 0.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      c.fn();
    } catch (const CheckFailure& f) {
      verdict = "FAIL";
      detail = f.message;
      ++failures;
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = std::string("exception: ") + e.what();
      ++failures;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (verdict == "PASS" && c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      verdict = "FAIL";
      detail = "time limit " + fmt(c.time_limit_s) + "s exceeded";
      ++failures;
    }
    std::printf("%s %2d  %s  (%.1fs)%s%s\n", verdict.c_str(), c.id, c.name, secs,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
