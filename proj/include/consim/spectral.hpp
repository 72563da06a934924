#pragma once

#include <vector>

namespace consim {

class StochasticMatrix;

struct EigenSystem {
  int dim = 0;
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row-major dim x dim; column k pairs with values[k]
  double vector_at(int row, int col) const {
    return vectors[static_cast<std::size_t>(row) * dim + col];
  }
};

// Full dense symmetric eigendecomposition by cyclic Jacobi rotations,
// iterated until the off-diagonal Frobenius norm falls below 1e-10.
// Matrices here are at most a few hundred rows, so no sparse machinery.
// Throws MatrixError if the input is not symmetric within 1e-12.
EigenSystem eigen_symmetric(const StochasticMatrix& m);

struct SpectralReport {
  std::vector<double> eigenvalues;  // descending
  double lambda2;                   // second largest (NaN when dim == 1)
  double gap_bound;                 // 1 - 1/(71 n^2)
};

SpectralReport spectral_report(const StochasticMatrix& m);

}  // namespace consim
