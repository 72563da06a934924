#include "consim/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "consim/errors.hpp"
#include "consim/graph.hpp"
#include "consim/spectral.hpp"
#include "consim/stochastic.hpp"
#include "consim/vec.hpp"
#include "format.hpp"

namespace consim {

MomentumParams momentum_default(double U) {
  if (!(U >= 1.0)) throw ParamError("node-count bound U must be at least 1");
  MomentumParams p;
  p.U = U;
  p.gamma = 2.0 / (9.0 * U + 1.0);
  p.alpha = 2.0 - p.gamma;
  p.eta = 1.0 - 1.0 / (9.0 * U);
  p.schedule = Schedule::kDefault;
  return p;
}

MomentumParams momentum_grid(double U, double c) {
  if (!(U >= 2.0)) throw ParamError("grid schedule needs U >= 2");
  if (!(c > 0.0)) throw ParamError("grid schedule constant c must be positive");
  MomentumParams p;
  p.U = U;
  p.gamma = 2.0 / (c * std::sqrt(U * std::log(U)) + 1.0);
  if (p.gamma > 1.0)
    throw ParamError("grid schedule constant c too small: momentum gap exceeds 1");
  p.alpha = 2.0 - p.gamma;
  p.eta = 1.0 - p.gamma;
  p.schedule = Schedule::kGrid;
  return p;
}

ConsensusState make_consensus_state(std::vector<double> x1) {
  ConsensusState s;
  s.y = x1;
  s.x = std::move(x1);
  s.t = 1;
  return s;
}

namespace {

// y_i = x_i + (1/2) sum_{j in N(i)} (x_j - x_i)/max(d(i), d(j)).
std::vector<double> metropolis_average(const Graph& g, const std::vector<double>& x) {
  const int n = g.node_count();
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : g.neighbors(i))
      acc += (x[j] - x[i]) / static_cast<double>(std::max(g.degree(i), g.degree(j)));
    y[i] = x[i] + 0.5 * acc;
  }
  return y;
}

ConsensusState extrapolate(std::vector<double> y_new, const ConsensusState& s,
                           const MomentumParams& p) {
  const int n = static_cast<int>(y_new.size());
  ConsensusState out;
  out.t = s.t + 1;
  out.x.resize(n);
  const double m = 1.0 - p.gamma;
  for (int i = 0; i < n; ++i) out.x[i] = y_new[i] + m * (y_new[i] - s.y[i]);
  out.y = std::move(y_new);
  return out;
}

}  // namespace

ConsensusState consensus_step(const ConsensusState& s, const Graph& g,
                              const MomentumParams& p) {
  if (static_cast<int>(s.x.size()) != g.node_count() || s.x.size() != s.y.size())
    throw ShapeError("consensus state does not match graph size");
  return extrapolate(metropolis_average(g, s.x), s, p);
}

ConsensusState consensus_step(const ConsensusState& s, const StochasticMatrix& w,
                              const MomentumParams& p) {
  if (static_cast<int>(s.x.size()) != w.dim() || s.x.size() != s.y.size())
    throw ShapeError("consensus state does not match matrix size");
  return extrapolate(w.apply(s.x), s, p);
}

ConvergenceReport run_consensus(const Graph& g, const std::vector<double>& x1,
                                const MomentumParams& p, double eps,
                                StopNorm norm, long max_iter) {
  if (!g.connected()) throw TopologyError("consensus needs a connected graph");
  if (static_cast<int>(x1.size()) != g.node_count())
    throw ShapeError("initial vector does not match graph size");
  if (!(eps > 0.0)) throw ParamError("stopping tolerance must be positive");
  if (max_iter < 1) throw ParamError("max_iter must be at least 1");

  const double xbar = mean(x1);
  ConsensusState s = make_consensus_state(x1);
  const double dev1 = l2sq_deviation(s.y, xbar);

  ConvergenceReport rep;
  for (long t = 1;; ++t) {
    rep.l2sq_dev.push_back(l2sq_deviation(s.y, xbar));
    rep.linf_dev.push_back(linf_deviation(s.x, xbar));
    rep.bound.push_back(2.0 * std::pow(p.eta, static_cast<double>(t - 1)) * dev1);
    const double stop_val = (norm == StopNorm::kInf)
                                ? rep.linf_dev.back()
                                : std::sqrt(l2sq_deviation(s.x, xbar));
    if (stop_val < eps) {
      rep.rounds = t;
      rep.converged = true;
      break;
    }
    if (t >= max_iter) {
      rep.rounds = max_iter;
      break;
    }
    s = consensus_step(s, g, p);
  }
  return rep;
}

void write_trace_csv(const ConvergenceReport& r, std::ostream& out) {
  out << "t,l2sq_dev,linf_dev,theorem_bound\n";
  for (std::size_t k = 0; k < r.l2sq_dev.size(); ++k) {
    out << (k + 1) << ',' << detail::fmt_double(r.l2sq_dev[k]) << ','
        << detail::fmt_double(r.linf_dev[k]) << ','
        << detail::fmt_double(r.bound[k]) << '\n';
  }
}

std::pair<double, double> block_iterate(double lambda, const MomentumParams& p,
                                        double r, long t) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw ParamError("block iteration needs lambda in [0, 1)");
  if (t < 1) throw ParamError("round index must be at least 1");
  double cur = r, prev = r;
  for (long k = 1; k < t; ++k) {
    const double next = lambda * (p.alpha * cur - (p.alpha - 1.0) * prev);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

std::vector<double> spectral_simulate(const Graph& g, const std::vector<double>& x1,
                                      const MomentumParams& p, long t) {
  if (!g.connected()) throw TopologyError("spectral simulation needs a connected graph");
  if (static_cast<int>(x1.size()) != g.node_count())
    throw ShapeError("initial vector does not match graph size");
  if (t < 1) throw ParamError("round index must be at least 1");
  if (t == 1) return x1;

  const EigenSystem es = eigen_symmetric(lazy_metropolis(g));
  const int n = es.dim;

  // z(1) = Q^T y(1)
  std::vector<double> z(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += es.vector_at(i, k) * x1[i];
    z[k] = s;
  }

  // Advance each coordinate with its own 2x2 block. The principal
  // coordinate (lambda ~= 1) is a fixed point of the recursion, so no
  // special case is needed.
  for (int k = 0; k < n; ++k) {
    const double lam = es.values[k];
    double cur = z[k], prev = z[k];
    for (long step = 1; step < t; ++step) {
      const double next = lam * (p.alpha * cur - (p.alpha - 1.0) * prev);
      prev = cur;
      cur = next;
    }
    z[k] = cur;
  }

  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += es.vector_at(i, k) * z[k];
    y[i] = s;
  }
  return y;
}

}  // namespace consim
