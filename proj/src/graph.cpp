#include "consim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "consim/errors.hpp"
#include "consim/rng.hpp"
#include "format.hpp"

namespace consim {

namespace {

bool bfs_covers_all(const std::vector<std::vector<int>>& nbrs) {
  const int n = static_cast<int>(nbrs.size());
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  int visited = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int j : nbrs[queue[head]]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++visited;
        queue.push_back(j);
      }
    }
  }
  return visited == n;
}

}  // namespace

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n), nbrs_(std::max(n, 0)) {
  if (n <= 0) throw SizeError("graph needs a positive node count");
  for (auto [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw SizeError("edge endpoint out of range");
    if (i == j) throw ParamError("self-loops are not allowed");
    nbrs_[i].push_back(j);
    nbrs_[j].push_back(i);
  }
  for (auto& lst : nbrs_) {
    std::sort(lst.begin(), lst.end());
    if (std::adjacent_find(lst.begin(), lst.end()) != lst.end())
      throw ParamError("duplicate edge");
  }
  connected_ = bfs_covers_all(nbrs_);
}

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) return false;
  return std::binary_search(nbrs_[i].begin(), nbrs_[i].end(), j);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j : nbrs_[i])
      if (i < j) out.emplace_back(i, j);
  return out;
}

int Graph::edge_count() const {
  int deg_sum = 0;
  for (int i = 0; i < n_; ++i) deg_sum += degree(i);
  return deg_sum / 2;
}

Graph line_graph(int n) {
  if (n < 2) throw SizeError("line graph needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph lollipop_graph(int n) {
  if (n < 4 || n % 2 != 0)
    throw SizeError("lollipop graph needs even n >= 4");
  const int half = n / 2;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < half; ++i)
    for (int j = i + 1; j < half; ++j) edges.emplace_back(i, j);
  for (int i = half; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(half - 1, half);
  return Graph(n, edges);
}

Graph grid_2d(int k) {
  if (k < 2) throw SizeError("grid needs k >= 2");
  std::vector<std::pair<int, int>> edges;
  auto idx = [k](int i, int j) { return i * k + j; };
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (j + 1 < k) edges.emplace_back(idx(i, j), idx(i, j + 1));
      if (i + 1 < k) edges.emplace_back(idx(i, j), idx(i + 1, j));
    }
  }
  return Graph(k * k, edges);
}

Graph complete_graph(int n) {
  if (n < 2) throw SizeError("complete graph needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

GeometricGraph geometric_random_graph(int n, double r, std::uint64_t seed) {
  if (n < 2) throw SizeError("geometric random graph needs n >= 2");
  if (!(r > 0.0)) throw ParamError("connectivity radius must be positive");
  SplitMix64 rng(seed);
  std::vector<std::array<double, 2>> coords(n);
  for (auto& c : coords) {
    c[0] = rng.uniform();
    c[1] = rng.uniform();
  }
  const double rsq = r * r;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = coords[i][0] - coords[j][0];
      const double dy = coords[i][1] - coords[j][1];
      if (dx * dx + dy * dy <= rsq) edges.emplace_back(i, j);
    }
  }
  return GeometricGraph{Graph(n, edges), std::move(coords)};
}

bool is_connected(const Graph& g) {
  std::vector<std::vector<int>> nbrs(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) nbrs[i] = g.neighbors(i);
  return bfs_covers_all(nbrs);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto edges = g.edges();
  out << g.node_count() << ' ' << edges.size() << '\n';
  for (auto [i, j] : edges) out << i + 1 << ' ' << j + 1 << '\n';
}

void write_edge_list(const GeometricGraph& g, std::ostream& out) {
  write_edge_list(g.graph, out);
  for (int i = 0; i < g.graph.node_count(); ++i)
    out << i + 1 << ' ' << detail::fmt_double(g.coords[i][0]) << ' '
        << detail::fmt_double(g.coords[i][1]) << '\n';
}

EdgeListFile read_edge_list(std::istream& in) {
  int n = 0;
  long m = 0;
  if (!(in >> n >> m)) throw IoError("edge list: cannot read header 'n m'");
  if (n <= 0 || m < 0) throw IoError("edge list: bad header values");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(m);
  for (long e = 0; e < m; ++e) {
    int i = 0, j = 0;
    if (!(in >> i >> j)) throw IoError("edge list: truncated edge section");
    if (i < 1 || i > n || j < 1 || j > n)
      throw IoError("edge list: endpoint out of range");
    edges.emplace_back(i - 1, j - 1);
  }
  // Optional coordinate section: n lines "i x y".
  int first_id = 0;
  if (!(in >> first_id)) return EdgeListFile{Graph(n, edges), std::nullopt};
  std::vector<std::array<double, 2>> coords(n, {0.0, 0.0});
  std::vector<char> seen(n, 0);
  int id = first_id;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && !(in >> id)) throw IoError("edge list: truncated coordinates");
    double x = 0.0, y = 0.0;
    if (!(in >> x >> y)) throw IoError("edge list: truncated coordinates");
    if (id < 1 || id > n || seen[id - 1])
      throw IoError("edge list: bad coordinate node id");
    seen[id - 1] = 1;
    coords[id - 1] = {x, y};
  }
  return EdgeListFile{Graph(n, edges), std::move(coords)};
}

}  // namespace consim
