#pragma once

#include <vector>

namespace consim {

class Graph;

// Dense symmetric doubly stochastic matrix, row-major. Immutable in normal
// use: the factories below fill it once and callers only read.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(int dim);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return a_; }

  // m * x
  std::vector<double> apply(const std::vector<double>& x) const;

  double max_asymmetry() const;  // max |a_ij - a_ji|
  double max_row_sum_error() const;  // max |row sum - 1|
  double min_diagonal() const;
  double min_entry() const;

 private:
  int dim_;
  std::vector<double> a_;
};

// Metropolis weights: off-diagonal 1/max(d(i), d(j)) on edges, zero
// elsewhere; diagonal set so each row sums to one. Each off-diagonal pair
// is computed once and mirrored, so symmetry is exact. Requires a
// connected graph.
StochasticMatrix metropolis(const Graph& g);

// Lazy variant (I + M)/2: diagonally dominant, all eigenvalues in [0, 1].
StochasticMatrix lazy_metropolis(const Graph& g);

}  // namespace consim
