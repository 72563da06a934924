#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

namespace consim {

class Graph;
class StochasticMatrix;

enum class Schedule { kDefault, kGrid };

// Extrapolation parameters of the two-line accelerated update. U is the
// node-count upper bound every node agrees on; gamma is the momentum gap;
// alpha = 2 - gamma is the combined extrapolation weight; eta is the
// geometric constant of the governing decay bound.
struct MomentumParams {
  double U = 1.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double eta = 0.0;
  Schedule schedule = Schedule::kDefault;
};

// gamma = 2/(9U+1), eta = 1 - 1/(9U). Requires U >= 1.
MomentumParams momentum_default(double U);

// gamma = 2/(c*sqrt(U ln U) + 1), eta = 1 - gamma. Suited to grids and
// geometric random graphs, whose mixing allows the faster schedule; the
// constant in front of sqrt(U ln U) is not pinned down by theory, so c is
// a knob (3 by default at the CLI). Requires U >= 2 and c > 0 large
// enough that gamma <= 1.
MomentumParams momentum_grid(double U, double c);

// Paired iterates of the accelerated update. States are immutable
// snapshots; every step returns a fresh one, so independent runs share
// nothing and may execute concurrently.
struct ConsensusState {
  std::vector<double> x;
  std::vector<double> y;
  long t = 1;
};

// y(1) = x(1), round counter starts at 1.
ConsensusState make_consensus_state(std::vector<double> x1);

// One synchronous round:
//   y_i <- x_i + (1/2) sum_{j in N(i)} (x_j - x_i)/max(d(i), d(j))
//   x_i <- y_i + (1 - gamma) (y_i - y_i_old)
// The Graph overload is the production path (no dense matrix); the
// StochasticMatrix overload computes y <- W x and exists as the algebraic
// cross-check. The two agree within 1e-12.
ConsensusState consensus_step(const ConsensusState& s, const Graph& g,
                              const MomentumParams& p);
ConsensusState consensus_step(const ConsensusState& s, const StochasticMatrix& w,
                              const MomentumParams& p);

enum class StopNorm { kInf, kTwo };

struct ConvergenceReport {
  long rounds = 0;       // first round meeting the stopping rule, or max_iter
  bool converged = false;
  // Per-round traces, index t-1:
  std::vector<double> l2sq_dev;  // ||y(t) - xbar 1||_2^2
  std::vector<double> linf_dev;  // ||x(t) - xbar 1||_inf
  std::vector<double> bound;     // 2 eta^(t-1) ||y(1) - xbar 1||_2^2
};

// Iterates until the chosen norm of (x(t) - xbar 1) drops below eps, with
// xbar fixed from x1. Hitting max_iter is reported, not thrown.
ConvergenceReport run_consensus(const Graph& g, const std::vector<double>& x1,
                                const MomentumParams& p, double eps,
                                StopNorm norm, long max_iter = 1000000);

// CSV with header "t,l2sq_dev,linf_dev,theorem_bound".
void write_trace_csv(const ConvergenceReport& r, std::ostream& out);

// (B(lambda))^(t-1) applied to (r, r), where
//   B(lambda) = [[alpha*lambda, -(alpha-1)*lambda], [1, 0]].
// Each spectral coordinate of the update evolves by exactly this 2x2
// iteration, which is what makes it worth exposing on its own. Requires
// 0 <= lambda < 1.
std::pair<double, double> block_iterate(double lambda, const MomentumParams& p,
                                        double r, long t);

// Reconstructs y(t) through the eigendecomposition of the lazy Metropolis
// matrix: map y(1) into spectral coordinates, advance each coordinate with
// its 2x2 block, map back. Independent of the neighbor-sum path and must
// agree with it within 1e-8.
std::vector<double> spectral_simulate(const Graph& g, const std::vector<double>& x1,
                                      const MomentumParams& p, long t);

}  // namespace consim
