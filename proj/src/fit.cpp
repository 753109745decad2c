#include "kobayashi/fit.hpp"

#include "kobayashi/errors.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>

namespace kobayashi {

ExponentFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) fail(ErrorCode::GridError, "abscissae and ordinates differ in length");
  if (n < 8) fail(ErrorCode::GridError, "an exponent fit needs at least 8 samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) fail(ErrorCode::GridError, "non-finite sample in fit");
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorCode::GridError, "abscissae are all equal");
  ExponentFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - f.intercept - f.exponent * x[i];
    rss += r * r;
  }
  double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  boost::math::students_t dist(static_cast<double>(n - 2));
  f.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * se;
  f.range_lo = *std::min_element(x.begin(), x.end());
  f.range_hi = *std::max_element(x.begin(), x.end());
  f.n_samples = n;
  return f;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out[n - 1] = hi;
  return out;
}

std::vector<double> geomspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > 0.0)) fail(ErrorCode::GridError, "geometric grid needs positive endpoints");
  auto l = linspace(std::log(lo), std::log(hi), n);
  for (auto& v : l) v = std::exp(v);
  if (n > 0) {
    l.front() = lo;
    l.back() = hi;
  }
  return l;
}

}  // namespace kobayashi
