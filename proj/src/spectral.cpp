#include "consim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "consim/errors.hpp"
#include "consim/stochastic.hpp"

namespace consim {

namespace {

double off_diagonal_norm(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      const double v = a[static_cast<std::size_t>(p) * n + q];
      s += 2.0 * v * v;
    }
  return std::sqrt(s);
}

}  // namespace

EigenSystem eigen_symmetric(const StochasticMatrix& m) {
  if (m.max_asymmetry() > 1e-12)
    throw MatrixError("eigendecomposition needs a symmetric matrix");
  const int n = m.dim();
  std::vector<double> a = m.data();
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto at = [&](std::vector<double>& mat, int i, int j) -> double& {
    return mat[static_cast<std::size_t>(i) * n + j];
  };

  constexpr double kTol = 1e-10;
  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (off_diagonal_norm(a, n) >= kTol) {
    if (++sweep > kMaxSweeps)
      throw std::runtime_error("jacobi eigensolver did not converge");
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(a, p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = at(a, p, p);
        const double aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e154) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = ((theta >= 0.0) ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(a, r, p);
          const double arq = at(a, r, q);
          at(a, r, p) = at(a, p, r) = c * arp - s * arq;
          at(a, r, q) = at(a, q, r) = s * arp + c * arq;
        }
        at(a, p, p) = app - t * apq;
        at(a, q, q) = aqq + t * apq;
        at(a, p, q) = at(a, q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          const double vrp = at(v, r, p);
          const double vrq = at(v, r, q);
          at(v, r, p) = c * vrp - s * vrq;
          at(v, r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return at(a, i, i) > at(a, j, j);
  });

  EigenSystem es;
  es.dim = n;
  es.values.resize(n);
  es.vectors.resize(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    es.values[k] = at(a, order[k], order[k]);
    for (int r = 0; r < n; ++r)
      es.vectors[static_cast<std::size_t>(r) * n + k] = at(v, r, order[k]);
  }
  return es;
}

SpectralReport spectral_report(const StochasticMatrix& m) {
  EigenSystem es = eigen_symmetric(m);
  SpectralReport rep;
  rep.eigenvalues = std::move(es.values);
  rep.lambda2 = (es.dim >= 2) ? rep.eigenvalues[1]
                              : std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(es.dim);
  rep.gap_bound = 1.0 - 1.0 / (71.0 * n * n);
  return rep;
}

}  // namespace consim
