#pragma once

#include <vector>

namespace consim {

double mean(const std::vector<double>& v);

// ||v - center*1||_2^2
double l2sq_deviation(const std::vector<double>& v, double center);

// ||v - center*1||_inf
double linf_deviation(const std::vector<double>& v, double center);

// ||v - center*1||_1
double l1_deviation(const std::vector<double>& v, double center);

}  // namespace consim
