#include "consim/vec.hpp"

#include <cmath>

namespace consim {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double l2sq_deviation(const std::vector<double>& v, double center) {
  double s = 0.0;
  for (double x : v) {
    const double d = x - center;
    s += d * d;
  }
  return s;
}

double linf_deviation(const std::vector<double>& v, double center) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x - center));
  return m;
}

double l1_deviation(const std::vector<double>& v, double center) {
  double s = 0.0;
  for (double x : v) s += std::abs(x - center);
  return s;
}

}  // namespace consim
