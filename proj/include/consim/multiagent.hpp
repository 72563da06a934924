#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "consim/consensus.hpp"

namespace consim {

class Graph;

using Point = std::vector<double>;
using Points = std::vector<Point>;

Point centroid(const Points& pts);

// Desired offset vectors r_ij in R^d, stored for both orientations of
// every edge with r_ji = -r_ij enforced exactly at insertion time.
class FormationSpec {
 public:
  explicit FormationSpec(int dim);

  int dim() const { return dim_; }

  // Stores r at (i, j) and -r at (j, i). Throws MalformedSpecError if a
  // conflicting offset for either orientation was stored earlier.
  void set_offset(int i, int j, const Point& r);

  bool has_offset(int i, int j) const;
  // Throws IncompleteSpecError when no offset was stored for (i, j).
  const Point& offset(int i, int j) const;

  std::size_t directed_count() const { return off_.size(); }

 private:
  int dim_;
  std::map<std::pair<int, int>, Point> off_;
};

// File format: one line "i j r_1 ... r_d" per edge orientation, 1-based
// node ids; the reverse orientation is synthesized by negation. Lines
// starting with '#' are comments. d is inferred from the first data line.
FormationSpec read_formation_file(std::istream& in);
void write_formation_file(const Graph& g, const FormationSpec& spec,
                          std::ostream& out);

struct FormationValidity {
  bool valid = false;
  // First non-tree edge whose integrated positions disagree with its
  // offset; empty when valid.
  std::optional<std::pair<int, int>> violating_edge;
};

// Builds a breadth-first spanning tree rooted at node 0, integrates the
// offsets into candidate positions, and checks every non-tree edge against
// its offset within 1e-9 per coordinate. Offsets must cover all edges.
FormationValidity validate_formation(const Graph& g, const FormationSpec& spec);

// The unique in-formation configuration sharing the centroid of p1,
// obtained by integrating offsets from `anchor` and shifting. Any anchor
// yields the same result. Throws FormationInvalidError on an invalid spec.
Points target_formation(const Graph& g, const FormationSpec& spec,
                        const Points& p1, int anchor = 0);

// Position iterates of the formation update; y(1) = p(1).
struct AgentPositions {
  Points p, y;
  long t = 1;
};

AgentPositions make_agent_positions(Points p1);

// One round, applied coordinate-wise:
//   y_i <- p_i + (1/2) sum_{j in N(i)} (p_j - p_i - r_ij)/max(d(i), d(j))
//   p_i <- y_i + (1 - gamma)(y_i - y_i_old)
// with the default 9U+1 momentum schedule.
AgentPositions formation_step(const AgentPositions& s, const Graph& g,
                              const FormationSpec& spec, const MomentumParams& p);

// Iterates until sum_i ||y_i(t) - pbar_i||_2^2 < eps^2, where pbar comes
// from target_formation. The report's bound trace is
// 2 (1 - 1/(9U))^(t-1) times the initial squared distance. When traj_out
// is given, the position iterates p(t) are appended per round.
ConvergenceReport run_formation(const Graph& g, const FormationSpec& spec,
                                const Points& p1, double U, double eps,
                                long max_iter = 1000000,
                                std::vector<Points>* traj_out = nullptr);

// CSV rows "t,node,coord_1..coord_d" with 1-based node ids.
void write_trajectory_csv(const std::vector<Points>& traj, std::ostream& out);

// Leader set S (0-based node ids), shared pinned value v in R^d, and the
// node-count bound U. Leaders hold x_i = v at every round; their y is kept
// pinned as bookkeeping so the state shape is uniform, but no update ever
// reads it.
struct LeaderConfig {
  std::vector<int> leaders;
  Point v;
  double U = 1.0;
};

struct LeaderState {
  Points x, y;
  long t = 1;
};

// Pins leaders to v regardless of their entry in x1.
LeaderState make_leader_state(Points x1, const Graph& g, const LeaderConfig& cfg);

// One round for every non-leader i (leaders stay at v):
//   y_i <- x_i + (1/2) sum_{j in N(i)} (x_j - x_i)/max(d(i), dd(j))
//   x_i <- y_i + (1 - 2/(18U+1))(y_i - y_i_old)
// dd(j) is d(j) for non-leaders and the split-graph degree
// 2*|N(j) \ S| + |N(j) cap S| for leaders, which is exactly the degree j
// has in doubled_graph(g, S). With that convention the trajectories of
// this update coincide with plain consensus on the doubled graph under the
// node bound 2U — the reduction that yields the 1 - 1/(18U) rate.
LeaderState leader_step(const LeaderState& s, const Graph& g,
                        const LeaderConfig& cfg);

// Effective neighbor degrees used by leader_step.
std::vector<int> leader_effective_degrees(const Graph& g,
                                          const std::vector<int>& leaders);

struct DoubledGraph {
  Graph graph;
  std::vector<int> map_a;  // original -> first copy (identity layout)
  std::vector<int> map_b;  // original -> mirrored copy (leaders map to themselves)
};

// Splits each non-leader i into copies i_a (same index i) and i_b; every
// non-leader edge is duplicated across the two layers and every
// leader-to-non-leader edge attaches the leader to both copies.
// Leader-to-leader edges are kept as they are. The result is connected
// whenever g is.
DoubledGraph doubled_graph(const Graph& g, const std::vector<int>& leaders);

// Iterates until sum_i ||y_i(t) - v||_2^2 < eps^2; bound trace
// 2 (1 - 1/(18U))^(t-1) times the initial squared distance.
ConvergenceReport run_leader_follow(const Graph& g, const LeaderConfig& cfg,
                                    const Points& x1, double eps,
                                    long max_iter = 1000000,
                                    std::vector<Points>* traj_out = nullptr);

}  // namespace consim
