#pragma once

#include <cstddef>
#include <vector>

namespace kobayashi {

// Least-squares line y = intercept + exponent * x with a 95% Student-t band
// on the slope.
struct ExponentFit {
  double exponent = 0.0;
  double half_width = 0.0;
  double intercept = 0.0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::size_t n_samples = 0;
};

ExponentFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// n points evenly spaced on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t n);
// n points geometrically spaced on [lo, hi].
std::vector<double> geomspace(double lo, double hi, std::size_t n);

}  // namespace kobayashi
