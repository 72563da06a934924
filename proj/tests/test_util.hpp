#pragma once

// Helpers shared by the unit and acceptance suites. Everything here is
// deterministic given the seed.

#include <utility>
#include <vector>

#include "consim/graph.hpp"
#include "consim/rng.hpp"

namespace consim::testing {

// Connected by construction: a random recursive tree (node i attaches to a
// uniform earlier node) plus extra random edges.
inline Graph random_connected_graph(int n, std::uint64_t seed,
                                    double extra_edge_frac = 0.5) {
  SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng.below(i));
    edges.emplace_back(parent, i);
  }
  Graph tree(n, edges);
  const int extra = static_cast<int>(extra_edge_frac * n);
  for (int k = 0; k < extra; ++k) {
    const int i = static_cast<int>(rng.below(n));
    const int j = static_cast<int>(rng.below(n));
    if (i == j) continue;
    if (tree.has_edge(i, j)) continue;
    bool dup = false;
    for (auto [a, b] : edges)
      if ((a == i && b == j) || (a == j && b == i)) dup = true;
    if (dup) continue;
    edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

inline std::vector<double> random_vector(int n, std::uint64_t seed, double lo,
                                         double hi) {
  SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace consim::testing
