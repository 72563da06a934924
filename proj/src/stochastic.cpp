#include "consim/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "consim/errors.hpp"
#include "consim/graph.hpp"

namespace consim {

StochasticMatrix::StochasticMatrix(int dim) : dim_(dim) {
  if (dim <= 0) throw ShapeError("matrix dimension must be positive");
  a_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

std::vector<double> StochasticMatrix::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw ShapeError("matrix-vector dimension mismatch");
  std::vector<double> y(dim_, 0.0);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    const double* row = a_.data() + static_cast<std::size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double StochasticMatrix::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

double StochasticMatrix::max_row_sum_error() const {
  double m = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j);
    m = std::max(m, std::abs(s - 1.0));
  }
  return m;
}

double StochasticMatrix::min_diagonal() const {
  double m = (*this)(0, 0);
  for (int i = 1; i < dim_; ++i) m = std::min(m, (*this)(i, i));
  return m;
}

double StochasticMatrix::min_entry() const {
  double m = a_[0];
  for (double v : a_) m = std::min(m, v);
  return m;
}

StochasticMatrix metropolis(const Graph& g) {
  if (!g.connected()) throw TopologyError("metropolis weights need a connected graph");
  const int n = g.node_count();
  StochasticMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) {
      if (j <= i) continue;
      const double w = 1.0 / static_cast<double>(std::max(g.degree(i), g.degree(j)));
      m(i, j) = w;
      m(j, i) = w;
    }
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : g.neighbors(i)) off += m(i, j);
    // The off-diagonal weights sum to at most 1 (each is <= 1/d(i) and
    // there are d(i) of them), so a negative difference is rounding
    // residue; clamp it so the diagonal is nonnegative exactly.
    m(i, i) = std::max(0.0, 1.0 - off);
  }
  return m;
}

StochasticMatrix lazy_metropolis(const Graph& g) {
  StochasticMatrix m = metropolis(g);
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = (i == j) ? 0.5 + 0.5 * m(i, j) : 0.5 * m(i, j);
  return m;
}

}  // namespace consim
