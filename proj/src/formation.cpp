#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "consim/errors.hpp"
#include "consim/graph.hpp"
#include "consim/multiagent.hpp"
#include "format.hpp"

namespace consim {

Point centroid(const Points& pts) {
  if (pts.empty()) throw ShapeError("centroid of an empty point set");
  Point c(pts[0].size(), 0.0);
  for (const auto& p : pts)
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += p[k];
  for (double& v : c) v /= static_cast<double>(pts.size());
  return c;
}

FormationSpec::FormationSpec(int dim) : dim_(dim) {
  if (dim < 1) throw ParamError("formation dimension must be at least 1");
}

void FormationSpec::set_offset(int i, int j, const Point& r) {
  if (i == j) throw MalformedSpecError("offset between a node and itself");
  if (static_cast<int>(r.size()) != dim_)
    throw ShapeError("offset dimension does not match the formation");
  Point neg(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) neg[k] = -r[k];
  const auto fwd = off_.find({i, j});
  if (fwd != off_.end() && fwd->second != r)
    throw MalformedSpecError("conflicting offset for an edge orientation");
  const auto rev = off_.find({j, i});
  if (rev != off_.end() && rev->second != neg)
    throw MalformedSpecError("offsets are not antisymmetric");
  off_[{i, j}] = r;
  off_[{j, i}] = std::move(neg);
}

bool FormationSpec::has_offset(int i, int j) const {
  return off_.count({i, j}) > 0;
}

const Point& FormationSpec::offset(int i, int j) const {
  const auto it = off_.find({i, j});
  if (it == off_.end())
    throw IncompleteSpecError("no offset stored for edge (" +
                              std::to_string(i + 1) + ", " +
                              std::to_string(j + 1) + ")");
  return it->second;
}

FormationSpec read_formation_file(std::istream& in) {
  std::string line;
  std::optional<FormationSpec> spec;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    if (!(row >> i >> j)) throw IoError("formation file: bad edge line");
    std::vector<double> r;
    double v = 0.0;
    while (row >> v) r.push_back(v);
    if (r.empty()) throw IoError("formation file: offset has no coordinates");
    if (i < 1 || j < 1) throw IoError("formation file: node ids are 1-based");
    if (!spec) spec.emplace(static_cast<int>(r.size()));
    if (static_cast<int>(r.size()) != spec->dim())
      throw IoError("formation file: inconsistent offset dimensions");
    spec->set_offset(i - 1, j - 1, r);
  }
  if (!spec) throw IoError("formation file: no offsets found");
  return *spec;
}

void write_formation_file(const Graph& g, const FormationSpec& spec,
                          std::ostream& out) {
  for (auto [i, j] : g.edges()) {
    out << i + 1 << ' ' << j + 1;
    for (double v : spec.offset(i, j)) out << ' ' << detail::fmt_double(v);
    out << '\n';
  }
}

namespace {

// Positions obtained by walking a breadth-first tree from `anchor` and
// summing offsets; q[anchor] = 0.
Points integrate_offsets(const Graph& g, const FormationSpec& spec, int anchor,
                         std::vector<std::pair<int, int>>* tree_edges = nullptr) {
  const int n = g.node_count();
  Points q(n, Point(spec.dim(), 0.0));
  std::vector<char> seen(n, 0);
  std::vector<int> queue{anchor};
  seen[anchor] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int i = queue[head];
    for (int j : g.neighbors(i)) {
      if (seen[j]) continue;
      seen[j] = 1;
      const Point& r = spec.offset(i, j);
      for (int k = 0; k < spec.dim(); ++k) q[j][k] = q[i][k] + r[k];
      if (tree_edges) tree_edges->emplace_back(i, j);
      queue.push_back(j);
    }
  }
  return q;
}

}  // namespace

FormationValidity validate_formation(const Graph& g, const FormationSpec& spec) {
  if (!g.connected()) throw TopologyError("formation needs a connected graph");
  for (auto [i, j] : g.edges()) {
    if (!spec.has_offset(i, j) || !spec.has_offset(j, i))
      throw IncompleteSpecError("no offset stored for edge (" +
                                std::to_string(i + 1) + ", " +
                                std::to_string(j + 1) + ")");
  }
  std::vector<std::pair<int, int>> tree;
  const Points q = integrate_offsets(g, spec, 0, &tree);
  std::vector<char> in_tree(static_cast<std::size_t>(g.node_count()) *
                                g.node_count(),
                            0);
  for (auto [i, j] : tree) {
    in_tree[static_cast<std::size_t>(i) * g.node_count() + j] = 1;
    in_tree[static_cast<std::size_t>(j) * g.node_count() + i] = 1;
  }
  constexpr double kTol = 1e-9;
  for (auto [i, j] : g.edges()) {
    if (in_tree[static_cast<std::size_t>(i) * g.node_count() + j]) continue;
    const Point& r = spec.offset(i, j);
    for (int k = 0; k < spec.dim(); ++k) {
      if (std::abs(q[j][k] - q[i][k] - r[k]) > kTol)
        return FormationValidity{false, std::make_pair(i, j)};
    }
  }
  return FormationValidity{true, std::nullopt};
}

Points target_formation(const Graph& g, const FormationSpec& spec,
                        const Points& p1, int anchor) {
  const int n = g.node_count();
  if (static_cast<int>(p1.size()) != n)
    throw ShapeError("positions do not match graph size");
  for (const auto& p : p1)
    if (static_cast<int>(p.size()) != spec.dim())
      throw ShapeError("position dimension does not match the formation");
  if (anchor < 0 || anchor >= n) throw ParamError("anchor node out of range");
  const FormationValidity v = validate_formation(g, spec);
  if (!v.valid)
    throw FormationInvalidError("offsets are inconsistent around a cycle");
  Points q = integrate_offsets(g, spec, anchor);
  const Point cp = centroid(p1);
  const Point cq = centroid(q);
  for (auto& qi : q)
    for (int k = 0; k < spec.dim(); ++k) qi[k] += cp[k] - cq[k];
  return q;
}

AgentPositions make_agent_positions(Points p1) {
  AgentPositions s;
  s.y = p1;
  s.p = std::move(p1);
  s.t = 1;
  return s;
}

AgentPositions formation_step(const AgentPositions& s, const Graph& g,
                              const FormationSpec& spec, const MomentumParams& p) {
  const int n = g.node_count();
  const int d = spec.dim();
  if (static_cast<int>(s.p.size()) != n || s.p.size() != s.y.size())
    throw ShapeError("agent positions do not match graph size");
  AgentPositions out;
  out.t = s.t + 1;
  out.y.assign(n, Point(d, 0.0));
  out.p.assign(n, Point(d, 0.0));
  const double m = 1.0 - p.gamma;
  for (int i = 0; i < n; ++i) {
    Point acc(d, 0.0);
    for (int j : g.neighbors(i)) {
      const double mx = static_cast<double>(std::max(g.degree(i), g.degree(j)));
      const Point& r = spec.offset(i, j);
      for (int k = 0; k < d; ++k) acc[k] += (s.p[j][k] - s.p[i][k] - r[k]) / mx;
    }
    for (int k = 0; k < d; ++k) {
      out.y[i][k] = s.p[i][k] + 0.5 * acc[k];
      out.p[i][k] = out.y[i][k] + m * (out.y[i][k] - s.y[i][k]);
    }
  }
  return out;
}

namespace {

double sum_sq_distance(const Points& a, const Points& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const double d = a[i][k] - b[i][k];
      s += d * d;
    }
  return s;
}

double max_abs_distance(const Points& a, const Points& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k)
      m = std::max(m, std::abs(a[i][k] - b[i][k]));
  return m;
}

}  // namespace

ConvergenceReport run_formation(const Graph& g, const FormationSpec& spec,
                                const Points& p1, double U, double eps,
                                long max_iter, std::vector<Points>* traj_out) {
  if (!(eps > 0.0)) throw ParamError("stopping tolerance must be positive");
  if (max_iter < 1) throw ParamError("max_iter must be at least 1");
  const Points pbar = target_formation(g, spec, p1);
  const MomentumParams p = momentum_default(U);

  AgentPositions s = make_agent_positions(p1);
  const double dev1 = sum_sq_distance(s.y, pbar);
  const double eps_sq = eps * eps;

  ConvergenceReport rep;
  for (long t = 1;; ++t) {
    const double dev = sum_sq_distance(s.y, pbar);
    rep.l2sq_dev.push_back(dev);
    rep.linf_dev.push_back(max_abs_distance(s.y, pbar));
    rep.bound.push_back(2.0 * std::pow(p.eta, static_cast<double>(t - 1)) * dev1);
    if (traj_out) traj_out->push_back(s.p);
    if (dev < eps_sq) {
      rep.rounds = t;
      rep.converged = true;
      break;
    }
    if (t >= max_iter) {
      rep.rounds = max_iter;
      break;
    }
    s = formation_step(s, g, spec, p);
  }
  return rep;
}

void write_trajectory_csv(const std::vector<Points>& traj, std::ostream& out) {
  if (traj.empty()) return;
  const int d = traj[0].empty() ? 0 : static_cast<int>(traj[0][0].size());
  out << "t,node";
  for (int k = 1; k <= d; ++k) out << ",coord_" << k;
  out << '\n';
  for (std::size_t t = 0; t < traj.size(); ++t) {
    for (std::size_t i = 0; i < traj[t].size(); ++i) {
      out << (t + 1) << ',' << (i + 1);
      for (double v : traj[t][i]) out << ',' << detail::fmt_double(v);
      out << '\n';
    }
  }
}

}  // namespace consim
