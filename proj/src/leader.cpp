#include <algorithm>
#include <cmath>

#include "consim/errors.hpp"
#include "consim/graph.hpp"
#include "consim/multiagent.hpp"

namespace consim {

namespace {

std::vector<char> leader_mask(int n, const std::vector<int>& leaders) {
  if (leaders.empty()) throw ConfigError("leader set must be nonempty");
  std::vector<char> mask(n, 0);
  for (int i : leaders) {
    if (i < 0 || i >= n) throw ConfigError("leader index out of range");
    mask[i] = 1;
  }
  return mask;
}

void check_points(const Points& pts, int n, int d, const char* what) {
  if (static_cast<int>(pts.size()) != n) throw ShapeError(std::string(what) + ": wrong node count");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != d)
      throw ShapeError(std::string(what) + ": wrong dimension");
}

}  // namespace

std::vector<int> leader_effective_degrees(const Graph& g,
                                          const std::vector<int>& leaders) {
  const int n = g.node_count();
  const std::vector<char> mask = leader_mask(n, leaders);
  std::vector<int> eff(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) {
      eff[i] = g.degree(i);
      continue;
    }
    int d = 0;
    for (int j : g.neighbors(i)) d += mask[j] ? 1 : 2;
    eff[i] = d;
  }
  return eff;
}

LeaderState make_leader_state(Points x1, const Graph& g, const LeaderConfig& cfg) {
  const int n = g.node_count();
  const int d = static_cast<int>(cfg.v.size());
  if (d < 1) throw ConfigError("leader target must have at least one coordinate");
  if (!(cfg.U >= 1.0)) throw ParamError("node-count bound U must be at least 1");
  const std::vector<char> mask = leader_mask(n, cfg.leaders);
  check_points(x1, n, d, "leader state");
  for (int i = 0; i < n; ++i)
    if (mask[i]) x1[i] = cfg.v;
  LeaderState s;
  s.y = x1;
  s.x = std::move(x1);
  s.t = 1;
  return s;
}

LeaderState leader_step(const LeaderState& s, const Graph& g,
                        const LeaderConfig& cfg) {
  const int n = g.node_count();
  const int d = static_cast<int>(cfg.v.size());
  const std::vector<char> mask = leader_mask(n, cfg.leaders);
  check_points(s.x, n, d, "leader state");
  check_points(s.y, n, d, "leader state");
  const std::vector<int> eff = leader_effective_degrees(g, cfg.leaders);
  // Same form as momentum_default(2U): gamma = 2/(18U+1).
  const double gamma = 2.0 / (18.0 * cfg.U + 1.0);
  const double m = 1.0 - gamma;

  LeaderState out;
  out.t = s.t + 1;
  out.x.assign(n, Point(d, 0.0));
  out.y.assign(n, Point(d, 0.0));
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      out.x[i] = cfg.v;
      out.y[i] = cfg.v;
      continue;
    }
    Point acc(d, 0.0);
    for (int j : g.neighbors(i)) {
      const double mx = static_cast<double>(std::max(eff[i], eff[j]));
      for (int k = 0; k < d; ++k) acc[k] += (s.x[j][k] - s.x[i][k]) / mx;
    }
    for (int k = 0; k < d; ++k) {
      out.y[i][k] = s.x[i][k] + 0.5 * acc[k];
      out.x[i][k] = out.y[i][k] + m * (out.y[i][k] - s.y[i][k]);
    }
  }
  return out;
}

DoubledGraph doubled_graph(const Graph& g, const std::vector<int>& leaders) {
  if (!g.connected()) throw TopologyError("doubling needs a connected graph");
  const int n = g.node_count();
  const std::vector<char> mask = leader_mask(n, leaders);

  std::vector<int> map_a(n), map_b(n);
  int next = n;
  for (int i = 0; i < n; ++i) {
    map_a[i] = i;
    map_b[i] = mask[i] ? i : next++;
  }

  std::vector<std::pair<int, int>> edges;
  for (auto [i, j] : g.edges()) {
    if (mask[i] && mask[j]) {
      edges.emplace_back(i, j);
    } else if (!mask[i] && !mask[j]) {
      edges.emplace_back(i, j);
      edges.emplace_back(map_b[i], map_b[j]);
    } else {
      const int leader = mask[i] ? i : j;
      const int follower = mask[i] ? j : i;
      edges.emplace_back(leader, follower);
      edges.emplace_back(leader, map_b[follower]);
    }
  }
  return DoubledGraph{Graph(next, edges), std::move(map_a), std::move(map_b)};
}

ConvergenceReport run_leader_follow(const Graph& g, const LeaderConfig& cfg,
                                    const Points& x1, double eps, long max_iter,
                                    std::vector<Points>* traj_out) {
  if (!g.connected()) throw TopologyError("leader following needs a connected graph");
  if (!(eps > 0.0)) throw ParamError("stopping tolerance must be positive");
  if (max_iter < 1) throw ParamError("max_iter must be at least 1");

  LeaderState s = make_leader_state(x1, g, cfg);
  const double eta = 1.0 - 1.0 / (18.0 * cfg.U);
  const Points target(g.node_count(), cfg.v);

  auto sum_sq = [&](const Points& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < a[i].size(); ++k) {
        const double dd = a[i][k] - target[i][k];
        acc += dd * dd;
      }
    return acc;
  };
  auto max_abs = [&](const Points& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t k = 0; k < a[i].size(); ++k)
        m = std::max(m, std::abs(a[i][k] - target[i][k]));
    return m;
  };

  const double dev1 = sum_sq(s.y);
  const double eps_sq = eps * eps;
  ConvergenceReport rep;
  for (long t = 1;; ++t) {
    const double dev = sum_sq(s.y);
    rep.l2sq_dev.push_back(dev);
    rep.linf_dev.push_back(max_abs(s.y));
    rep.bound.push_back(2.0 * std::pow(eta, static_cast<double>(t - 1)) * dev1);
    if (traj_out) traj_out->push_back(s.x);
    if (dev < eps_sq) {
      rep.rounds = t;
      rep.converged = true;
      break;
    }
    if (t >= max_iter) {
      rep.rounds = max_iter;
      break;
    }
    s = leader_step(s, g, cfg);
  }
  return rep;
}

}  // namespace consim
