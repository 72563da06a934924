#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace consim {

// Undirected simple graph over 0-based node indices. Neighbor lists are
// sorted, adjacency is symmetric and self-loops are rejected at
// construction. Connectivity is checked once at construction and recorded;
// protocol operations require connected() == true. Instances are immutable
// and safe to share across threads.
class Graph {
 public:
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return n_; }
  int degree(int i) const { return static_cast<int>(nbrs_[i].size()); }
  const std::vector<int>& neighbors(int i) const { return nbrs_[i]; }
  bool connected() const { return connected_; }
  bool has_edge(int i, int j) const;

  // All edges as (i, j) pairs with i < j, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;

 private:
  int n_;
  std::vector<std::vector<int>> nbrs_;
  bool connected_;
};

// Path 0-1-...-(n-1). Requires n >= 2.
Graph line_graph(int n);

// Complete graph on nodes {0,...,n/2-1}, path on {n/2,...,n-1}, and the
// bridge edge (n/2-1, n/2). Requires n >= 4 and n even; odd sizes are
// rejected rather than split unevenly.
Graph lollipop_graph(int n);

// k x k grid, n = k^2 nodes; node (i, j), both 1-based, sits at index
// (i-1)*k + (j-1). Requires k >= 2.
Graph grid_2d(int k);

// All n*(n-1)/2 edges. Requires n >= 2.
Graph complete_graph(int n);

struct GeometricGraph {
  Graph graph;
  std::vector<std::array<double, 2>> coords;  // positions in [0,1]^2
};

// n points drawn i.i.d. uniform on [0,1]^2 from SplitMix64(seed), with an
// edge wherever the Euclidean distance is at most r. Identical
// (n, r, seed) always yields the identical graph. The draw is returned
// as-is even when disconnected; callers decide whether to resample.
GeometricGraph geometric_random_graph(int n, double r, std::uint64_t seed);

// Breadth-first reachability from node 0 covers all nodes. A single node
// is connected vacuously.
bool is_connected(const Graph& g);

// Edge-list text format: first line "n m", then m lines "i j" with
// 1-based endpoints. Geometric graphs append n lines "i x y".
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const GeometricGraph& g, std::ostream& out);

struct EdgeListFile {
  Graph graph;
  std::optional<std::vector<std::array<double, 2>>> coords;
};
EdgeListFile read_edge_list(std::istream& in);

}  // namespace consim
