#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "consim/consensus.hpp"

namespace consim {

class Graph;
class StochasticMatrix;

// One scalar convex function per node, each exposing value and a
// subgradient, plus a uniform bound L on subgradient magnitude. Evaluation
// must be side-effect-free; the set is shared read-only across nodes.
class ObjectiveSet {
 public:
  using Fn = std::function<double(double)>;

  ObjectiveSet(std::vector<Fn> values, std::vector<Fn> subgrads, double L,
               std::optional<double> optimum = std::nullopt,
               std::optional<double> optimum_value = std::nullopt);

  int size() const { return static_cast<int>(values_.size()); }
  double subgradient_bound() const { return L_; }
  double value(int i, double theta) const { return values_[i](theta); }
  double subgradient(int i, double theta) const { return subgrads_[i](theta); }

  // f(theta) = (1/n) sum_i f_i(theta)
  double average_value(double theta) const;

  const std::optional<double>& optimum() const { return optimum_; }
  // f(w*); throws MetricError when no optimum is known.
  double optimum_value() const;

  // f_i(theta) = |theta - w_i|, L = 1. The subgradient at theta == w_i is
  // taken to be 0. Optimum: the lower-middle median of w.
  static ObjectiveSet absolute_loss(const std::vector<double>& w);

  // f_i(theta) = (theta - w_i)^2 on the box [lo, hi] (which must contain
  // every w_i). Subgradients are clamped to [-L, L] outside the box so the
  // uniform bound survives without projecting iterates. Optimum: mean(w).
  static ObjectiveSet quadratic_loss(const std::vector<double>& w, double lo,
                                     double hi);

  // f_i == 0 with L fixed at 1; reduces the protocol to pure consensus.
  static ObjectiveSet zero(int n);

 private:
  std::vector<Fn> values_;
  std::vector<Fn> subgrads_;
  double L_;
  std::optional<double> optimum_;
  std::optional<double> optimum_value_;
};

// "abs:w=1,2,3" or "quad:w=1,2,3,box=-5:5" -> built-in objective.
ObjectiveSet parse_objective(const std::string& text);
// The w list embedded in an objective string (doubles as the x(1) vector).
std::vector<double> objective_start_values(const std::string& text);

// 1/(L sqrt(U T)); all arguments positive.
double beta_step(double L, double U, long T);

// Triple iterate of the subgradient protocol plus the running-average
// accumulator. Immutable snapshot per round, same contract as
// ConsensusState.
struct OptState {
  std::vector<double> x, y, z;
  std::vector<double> ysum;        // sum of y produced by the steps so far
  std::vector<double> xbar_trace;  // mean of x at rounds 1..t
  long t = 1;
};

// z(1) = y(1) = x(1), ysum = 0.
OptState make_opt_state(std::vector<double> x1);

// One round:
//   g_i   = subgradient of f_i at y_i(t)       (at y, not x)
//   y_i  <- [metropolis average of x]_i - beta g_i
//   z_i  <- y_i_old - beta g_i
//   x_i  <- y_i + (1 - gamma)(y_i - z_i)
// With beta = 0 this reproduces the consensus step bit for bit.
OptState optimize_step(const OptState& s, const Graph& g, const MomentumParams& p,
                       double beta, const ObjectiveSet& obj);
OptState optimize_step(const OptState& s, const StochasticMatrix& w,
                       const MomentumParams& p, double beta, const ObjectiveSet& obj);

// Plain distributed subgradient baseline: x <- W x - alpha_step g with g
// evaluated at x. Kept untuned on purpose; it is the comparison point.
std::vector<double> baseline_step(const std::vector<double>& x, const Graph& g,
                                  double alpha_step, const ObjectiveSet& obj);
std::vector<double> baseline_step(const std::vector<double>& x,
                                  const StochasticMatrix& w, double alpha_step,
                                  const ObjectiveSet& obj);

// Lower-middle order statistic for even lengths; the exact middle for odd.
double median_lower(std::vector<double> v);

// (1/n) sum_i |theta_i - median(theta)| with the lower-median convention.
double dispersion(const std::vector<double>& theta);

// (1/n) sum_i f_i(theta_i) - f(w*). May be negative, since each node plugs
// its own theta_i into only its own f_i. Throws MetricError when the
// objective carries no optimum.
double error_metric(const std::vector<double>& theta, const ObjectiveSet& obj);

struct OptTraceRow {
  long t = 1;               // round counter
  double xbar = 0.0;        // mean of x(t)
  double l1_dev = 0.0;      // ||y(t) - xbar(t) 1||_1
  double disp_running = 0.0;  // dispersion of the running average
  double err_running = 0.0;   // error of the running average (when defined)
  bool has_err = false;
};

struct OptReport {
  std::vector<double> yhat;  // running average of the T produced y iterates
  double disp = 0.0;
  double err = 0.0;
  bool has_err = false;
  double bound_disp = 0.0;
  double bound_err = 0.0;
  bool has_bound_err = false;
  std::vector<OptTraceRow> trace;
};

// Runs T rounds with beta = 1/(L sqrt(U T)) and the default momentum
// schedule, then evaluates the running average. bound_disp is
//   18 sqrt(2) sqrt(U/T) + 18 sqrt(2) U ||y(1) - xbar 1||_2 / (sqrt(n) T)
// and bound_err the matching six-term expression; both are guarantees only
// when U >= n.
OptReport run_optimize(const Graph& g, const std::vector<double>& x1,
                       const ObjectiveSet& obj, double U, long T);

// CSV with header "t,xbar,l1_dev_from_xbar,disp_running,err_running" and a
// trailing "# summary ..." line carrying disp, bound_disp, err, bound_err.
void write_opt_csv(const OptReport& r, std::ostream& out);

}  // namespace consim
