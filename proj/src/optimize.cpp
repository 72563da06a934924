#include "consim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "consim/errors.hpp"
#include "consim/graph.hpp"
#include "consim/stochastic.hpp"
#include "consim/vec.hpp"
#include "format.hpp"

namespace consim {

ObjectiveSet::ObjectiveSet(std::vector<Fn> values, std::vector<Fn> subgrads,
                           double L, std::optional<double> optimum,
                           std::optional<double> optimum_value)
    : values_(std::move(values)),
      subgrads_(std::move(subgrads)),
      L_(L),
      optimum_(optimum),
      optimum_value_(optimum_value) {
  if (values_.empty() || values_.size() != subgrads_.size())
    throw ShapeError("objective set needs one value/subgradient pair per node");
  if (!(L_ > 0.0)) throw ParamError("subgradient bound L must be positive");
}

double ObjectiveSet::average_value(double theta) const {
  double s = 0.0;
  for (const auto& f : values_) s += f(theta);
  return s / static_cast<double>(values_.size());
}

double ObjectiveSet::optimum_value() const {
  if (optimum_value_) return *optimum_value_;
  if (!optimum_) throw MetricError("objective carries no known optimum");
  return average_value(*optimum_);
}

ObjectiveSet ObjectiveSet::absolute_loss(const std::vector<double>& w) {
  if (w.empty()) throw ShapeError("absolute loss needs at least one target");
  std::vector<Fn> values, subgrads;
  values.reserve(w.size());
  subgrads.reserve(w.size());
  for (double wi : w) {
    values.push_back([wi](double th) { return std::abs(th - wi); });
    subgrads.push_back([wi](double th) {
      if (th > wi) return 1.0;
      if (th < wi) return -1.0;
      return 0.0;
    });
  }
  const double med = median_lower(w);
  double fstar = 0.0;
  for (double wi : w) fstar += std::abs(med - wi);
  fstar /= static_cast<double>(w.size());
  return ObjectiveSet(std::move(values), std::move(subgrads), 1.0, med, fstar);
}

ObjectiveSet ObjectiveSet::quadratic_loss(const std::vector<double>& w, double lo,
                                          double hi) {
  if (w.empty()) throw ShapeError("quadratic loss needs at least one target");
  if (!(lo < hi)) throw ParamError("quadratic loss box must have lo < hi");
  double L = 0.0;
  for (double wi : w) {
    if (wi < lo || wi > hi)
      throw ParamError("quadratic loss targets must lie inside the box");
    L = std::max(L, 2.0 * std::max(hi - wi, wi - lo));
  }
  if (!(L > 0.0)) L = 1.0;  // all targets equal and box degenerate-adjacent
  std::vector<Fn> values, subgrads;
  for (double wi : w) {
    values.push_back([wi](double th) { return (th - wi) * (th - wi); });
    subgrads.push_back([wi, L](double th) {
      return std::clamp(2.0 * (th - wi), -L, L);
    });
  }
  const double m = mean(w);
  double fstar = 0.0;
  for (double wi : w) fstar += (m - wi) * (m - wi);
  fstar /= static_cast<double>(w.size());
  return ObjectiveSet(std::move(values), std::move(subgrads), L, m, fstar);
}

ObjectiveSet ObjectiveSet::zero(int n) {
  if (n < 1) throw ShapeError("objective set needs at least one node");
  std::vector<Fn> values(n, [](double) { return 0.0; });
  std::vector<Fn> subgrads(n, [](double) { return 0.0; });
  return ObjectiveSet(std::move(values), std::move(subgrads), 1.0, 0.0, 0.0);
}

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw ParamError("objective: bad number '" + token + "'");
    }
    if (pos != token.size())
      throw ParamError("objective: bad number '" + token + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParamError("objective: empty value list");
  return out;
}

struct ParsedObjective {
  std::string kind;
  std::vector<double> w;
  double lo = 0.0, hi = 0.0;
};

ParsedObjective parse_objective_text(const std::string& text) {
  ParsedObjective po;
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ParamError("objective: expected '<name>:w=...'");
  po.kind = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  if (rest.rfind("w=", 0) != 0) throw ParamError("objective: expected 'w=' list");
  rest = rest.substr(2);
  if (po.kind == "abs") {
    po.w = parse_double_list(rest);
  } else if (po.kind == "quad") {
    const auto boxpos = rest.find(",box=");
    if (boxpos == std::string::npos)
      throw ParamError("objective: quad needs ',box=lo:hi'");
    po.w = parse_double_list(rest.substr(0, boxpos));
    const std::string box = rest.substr(boxpos + 5);
    const auto sep = box.find(':');
    if (sep == std::string::npos) throw ParamError("objective: box must be 'lo:hi'");
    po.lo = std::stod(box.substr(0, sep));
    po.hi = std::stod(box.substr(sep + 1));
  } else {
    throw ParamError("objective: unknown name '" + po.kind + "'");
  }
  return po;
}

}  // namespace

ObjectiveSet parse_objective(const std::string& text) {
  const ParsedObjective po = parse_objective_text(text);
  if (po.kind == "abs") return ObjectiveSet::absolute_loss(po.w);
  return ObjectiveSet::quadratic_loss(po.w, po.lo, po.hi);
}

std::vector<double> objective_start_values(const std::string& text) {
  return parse_objective_text(text).w;
}

double beta_step(double L, double U, long T) {
  if (!(L > 0.0)) throw ParamError("subgradient bound L must be positive");
  if (!(U >= 1.0)) throw ParamError("node-count bound U must be at least 1");
  if (T < 1) throw ParamError("round budget T must be at least 1");
  return 1.0 / (L * std::sqrt(U * static_cast<double>(T)));
}

OptState make_opt_state(std::vector<double> x1) {
  OptState s;
  s.y = x1;
  s.z = x1;
  s.ysum.assign(x1.size(), 0.0);
  s.xbar_trace = {mean(x1)};
  s.x = std::move(x1);
  s.t = 1;
  return s;
}

namespace {

void check_opt_shapes(const OptState& s, int n, const ObjectiveSet& obj) {
  if (static_cast<int>(s.x.size()) != n || s.x.size() != s.y.size() ||
      s.x.size() != s.z.size() || s.x.size() != s.ysum.size())
    throw ShapeError("optimizer state does not match graph size");
  if (obj.size() != n) throw ShapeError("objective set does not match graph size");
}

template <typename Average>
OptState opt_step_impl(const OptState& s, int n, const MomentumParams& p,
                       double beta, const ObjectiveSet& obj, Average&& average) {
  if (!(beta >= 0.0)) throw ParamError("step size beta must be nonnegative");
  OptState out;
  out.t = s.t + 1;
  out.y = average(s.x);
  out.z.resize(n);
  out.x.resize(n);
  out.ysum.resize(n);
  const double m = 1.0 - p.gamma;
  for (int i = 0; i < n; ++i) {
    const double gi = obj.subgradient(i, s.y[i]);
    out.y[i] -= beta * gi;
    out.z[i] = s.y[i] - beta * gi;
    out.x[i] = out.y[i] + m * (out.y[i] - out.z[i]);
    out.ysum[i] = s.ysum[i] + out.y[i];
  }
  out.xbar_trace = s.xbar_trace;
  out.xbar_trace.push_back(mean(out.x));
  return out;
}

}  // namespace

OptState optimize_step(const OptState& s, const Graph& g, const MomentumParams& p,
                       double beta, const ObjectiveSet& obj) {
  const int n = g.node_count();
  check_opt_shapes(s, n, obj);
  return opt_step_impl(s, n, p, beta, obj, [&](const std::vector<double>& x) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j : g.neighbors(i))
        acc += (x[j] - x[i]) / static_cast<double>(std::max(g.degree(i), g.degree(j)));
      y[i] = x[i] + 0.5 * acc;
    }
    return y;
  });
}

OptState optimize_step(const OptState& s, const StochasticMatrix& w,
                       const MomentumParams& p, double beta, const ObjectiveSet& obj) {
  const int n = w.dim();
  check_opt_shapes(s, n, obj);
  return opt_step_impl(s, n, p, beta, obj,
                       [&](const std::vector<double>& x) { return w.apply(x); });
}

namespace {

template <typename Average>
std::vector<double> baseline_impl(const std::vector<double>& x, int n,
                                  double alpha_step, const ObjectiveSet& obj,
                                  Average&& average) {
  if (static_cast<int>(x.size()) != n || obj.size() != n)
    throw ShapeError("baseline state does not match graph size");
  if (!(alpha_step > 0.0)) throw ParamError("baseline step size must be positive");
  std::vector<double> out = average(x);
  for (int i = 0; i < n; ++i) out[i] -= alpha_step * obj.subgradient(i, x[i]);
  return out;
}

}  // namespace

std::vector<double> baseline_step(const std::vector<double>& x, const Graph& g,
                                  double alpha_step, const ObjectiveSet& obj) {
  const int n = g.node_count();
  return baseline_impl(x, n, alpha_step, obj, [&](const std::vector<double>& v) {
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j : g.neighbors(i))
        acc += (v[j] - v[i]) / static_cast<double>(std::max(g.degree(i), g.degree(j)));
      y[i] = v[i] + 0.5 * acc;
    }
    return y;
  });
}

std::vector<double> baseline_step(const std::vector<double>& x,
                                  const StochasticMatrix& w, double alpha_step,
                                  const ObjectiveSet& obj) {
  return baseline_impl(x, w.dim(), alpha_step, obj,
                       [&](const std::vector<double>& v) { return w.apply(v); });
}

double median_lower(std::vector<double> v) {
  if (v.empty()) throw ParamError("median of an empty list");
  const std::size_t k = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  return v[k];
}

double dispersion(const std::vector<double>& theta) {
  if (theta.empty()) throw ParamError("dispersion of an empty list");
  const double med = median_lower(theta);
  double s = 0.0;
  for (double th : theta) s += std::abs(th - med);
  return s / static_cast<double>(theta.size());
}

double error_metric(const std::vector<double>& theta, const ObjectiveSet& obj) {
  if (static_cast<int>(theta.size()) != obj.size())
    throw ShapeError("error metric: vector does not match objective set");
  if (!obj.optimum()) throw MetricError("error metric needs a known optimum");
  double s = 0.0;
  for (int i = 0; i < obj.size(); ++i) s += obj.value(i, theta[i]);
  return s / static_cast<double>(theta.size()) - obj.optimum_value();
}

OptReport run_optimize(const Graph& g, const std::vector<double>& x1,
                       const ObjectiveSet& obj, double U, long T) {
  if (!g.connected()) throw TopologyError("optimization needs a connected graph");
  const int n = g.node_count();
  if (static_cast<int>(x1.size()) != n)
    throw ShapeError("initial vector does not match graph size");
  if (T < 1) throw ParamError("round budget T must be at least 1");

  const MomentumParams p = momentum_default(U);
  const double L = obj.subgradient_bound();
  const double beta = beta_step(L, U, T);

  const double xbar1 = mean(x1);
  const double dev1 = std::sqrt(l2sq_deviation(x1, xbar1));  // ||y(1) - xbar 1||_2

  OptState s = make_opt_state(x1);

  OptReport rep;
  rep.trace.reserve(T + 1);
  auto push_row = [&](const std::vector<double>& running_avg) {
    OptTraceRow row;
    row.t = s.t;
    row.xbar = s.xbar_trace.back();
    row.l1_dev = l1_deviation(s.y, row.xbar);
    row.disp_running = dispersion(running_avg);
    if (obj.optimum()) {
      row.err_running = error_metric(running_avg, obj);
      row.has_err = true;
    }
    rep.trace.push_back(row);
  };
  push_row(s.y);  // round 1: no averaged iterate yet, report y(1) itself

  std::vector<double> running(n);
  for (long k = 1; k <= T; ++k) {
    s = optimize_step(s, g, p, beta, obj);
    for (int i = 0; i < n; ++i) running[i] = s.ysum[i] / static_cast<double>(k);
    push_row(running);
  }

  rep.yhat = running;
  rep.disp = dispersion(rep.yhat);
  const double rt = std::sqrt(static_cast<double>(T));
  const double s2 = std::sqrt(2.0);
  rep.bound_disp = 18.0 * s2 * std::sqrt(U) / rt +
                   18.0 * s2 * U * dev1 / (std::sqrt(static_cast<double>(n)) *
                                           static_cast<double>(T));
  if (obj.optimum()) {
    rep.err = error_metric(rep.yhat, obj);
    rep.has_err = true;
    const double xw = xbar1 - *obj.optimum();
    const double ru = std::sqrt(U);
    const double rn = std::sqrt(static_cast<double>(n));
    const double Td = static_cast<double>(T);
    rep.bound_err = L * ru * xw * xw / (2.0 * rt)    // initial-offset term
                    + L / (2.0 * rt * ru)            // step-size term
                    + 36.0 * s2 * L * ru / rt        // disagreement, running sum
                    + 36.0 * s2 * L * U * dev1 / (Td * rn)
                    + 18.0 * s2 * L * ru / rt        // disagreement, averaged iterate
                    + 18.0 * s2 * L * U * dev1 / (rn * Td);
    rep.has_bound_err = true;
  }
  return rep;
}

void write_opt_csv(const OptReport& r, std::ostream& out) {
  out << "t,xbar,l1_dev_from_xbar,disp_running,err_running\n";
  for (const auto& row : r.trace) {
    out << row.t << ',' << detail::fmt_double(row.xbar) << ','
        << detail::fmt_double(row.l1_dev) << ','
        << detail::fmt_double(row.disp_running) << ',';
    if (row.has_err)
      out << detail::fmt_double(row.err_running);
    else
      out << "na";
    out << '\n';
  }
  out << "# summary disp=" << detail::fmt_double(r.disp)
      << " bound_disp=" << detail::fmt_double(r.bound_disp);
  if (r.has_err)
    out << " err=" << detail::fmt_double(r.err)
        << " bound_err=" << detail::fmt_double(r.bound_err);
  else
    out << " err=na bound_err=na";
  out << '\n';
}

}  // namespace consim
