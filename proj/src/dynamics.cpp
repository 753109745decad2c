#include "kobayashi/dynamics.hpp"

#include "kobayashi/boundary.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/metrics.hpp"
#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kobayashi {

GeodesicRay GeodesicRay::siegel_vertical(const CVector& v, double alpha) {
  check_dim(static_cast<int>(v.size()));
  if (std::abs(v(0)) != 0.0) fail(ErrorCode::InvalidSpec, "base point must lie in span{e_2..e_d}");
  GeodesicRay r;
  r.dim_ = static_cast<int>(v.size());
  r.model_ = Model::Siegel;
  const double h = v.squaredNorm();
  r.curve_ = [v, alpha, h](double t) {
    CVector z = v;
    z(0) = cd(alpha, std::exp(2.0 * t) + h);
    return z;
  };
  r.tail_ = v;
  return r;
}

GeodesicRay GeodesicRay::ball_radial(const CVector& u) {
  check_dim(static_cast<int>(u.size()));
  double n = u.norm();
  if (n == 0.0) fail(ErrorCode::ZeroDirection, "ray direction is zero");
  GeodesicRay r;
  r.dim_ = static_cast<int>(u.size());
  r.model_ = Model::Ball;
  CVector un = u / n;
  r.curve_ = [un](double t) { return CVector(std::tanh(t) * un); };
  return r;
}

GeodesicRay GeodesicRay::custom(int dim, Model model, std::function<CVector(double)> curve) {
  check_dim(dim);
  if (!curve) fail(ErrorCode::InvalidSpec, "custom ray needs a curve");
  GeodesicRay r;
  r.dim_ = dim;
  r.model_ = model;
  r.curve_ = std::move(curve);
  return r;
}

CVector GeodesicRay::operator()(double t) const { return curve_(t); }

double model_distance(Model model, const CVector& z, const CVector& w) {
  return model == Model::Siegel ? dist_siegel(z, w) : dist_ball(z, w);
}

SliceProfile slice_alpha(const ConvexDomain& domain, const CVector& v, const Tolerances& tol) {
  const cd i(0.0, 1.0);
  auto inside = [&](double h) {
    CVector z = v;
    z(0) += i * h;
    return domain.contains(z);
  };
  double hi = 1.0;
  while (!inside(hi)) {
    hi *= 2.0;
    if (hi > domain.clip_radius()) return {std::numeric_limits<double>::infinity()};
  }
  double step = 1.0, lo = hi - step;
  while (inside(lo)) {
    step *= 2.0;
    lo = hi - step;
    if (-lo > domain.clip_radius()) return {-std::numeric_limits<double>::infinity()};
  }
  for (int k = 0; k < tol.max_bisection_steps; ++k) {
    if (hi - lo <= tol.bisection_rel_width * std::max(1.0, std::abs(hi))) break;
    double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  return {0.5 * (lo + hi)};
}

double time_shift(double t, double alpha_v) {
  double q = alpha_v * std::exp(-2.0 * t);
  if (!(q < 1.0)) fail(ErrorCode::DomainError, "time shift needs e^{2t} > alpha_v");
  return t + 0.5 * std::log1p(-q);
}

std::vector<CurveSample> pair_distance_curve(const GeodesicRay& ray1, const GeodesicRay& ray2,
                                             const std::vector<double>& t_grid, double shift) {
  if (ray1.dim() != ray2.dim() || ray1.model() != ray2.model())
    fail(ErrorCode::InvalidSpec, "rays must live in the same model domain");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1])) fail(ErrorCode::GridError, "time grid must be strictly increasing");

  // Rays on a common slice C e_1 + v: the slice is a half-plane and carries
  // the full distance.
  const auto& a = ray1.slice_tail();
  const auto& b = ray2.slice_tail();
  const bool common_slice = a && b && *a == *b;
  const double h = common_slice ? a->squaredNorm() : 0.0;

  std::vector<CurveSample> out(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t k) {
    double t = t_grid[k];
    CVector z = ray1(t), w = ray2(t + shift);
    CurveSample s{t, 0.0, common_slice ? "halfplane" : "invariant"};
    if (common_slice)
      s.distance = dist_halfplane(z(0) - cd(0.0, h), w(0) - cd(0.0, h));
    else
      s.distance = model_distance(ray1.model(), z, w);
    out[k] = s;
  });
  return out;
}

ExponentFit lyapunov_exponent(const GeodesicRay& ray1, const GeodesicRay& ray2, double t_min, double t_max,
                              std::size_t n, double shift) {
  if (!(t_max > t_min)) fail(ErrorCode::GridError, "t_max must exceed t_min");
  auto grid = linspace(t_min, t_max, n);
  auto curve = pair_distance_curve(ray1, ray2, grid, shift);
  std::vector<double> logk;
  for (const auto& s : curve) {
    if (!(s.distance >= 1e-300)) fail(ErrorCode::DegenerateRays, "rays coincide (distance below 1e-300)");
    logk.push_back(std::log(s.distance));
  }
  return fit_slope(grid, logk);
}

double optimal_shift(const GeodesicRay& ray1, const GeodesicRay& ray2, double t_eval, double lo, double hi) {
  auto K = [&](double T) { return model_distance(ray1.model(), ray1(t_eval), ray2(t_eval + T)); };
  const int n = 200;
  double step = (hi - lo) / n;
  int arg = 0;
  double best = K(lo);
  for (int k = 1; k <= n; ++k) {
    double v = K(lo + step * k);
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  double a = lo + step * std::max(arg - 1, 0), b = lo + step * std::min(arg + 1, n);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = K(x1), f2 = K(x2);
  while (b - a > 1e-10) {
    if (f1 <= f2) {
      b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = K(x1);
    } else {
      a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = K(x2);
    }
  }
  return 0.5 * (a + b);
}

ExponentFit boundary_growth_exponent(const ConvexDomain& domain, const CVector& v, double r_min, double r_max,
                                     std::size_t n, const Tolerances& tol) {
  const int d = domain.dim();
  if (v.size() != d) fail(ErrorCode::InvalidSpec, "direction has wrong dimension");
  if (v.norm() == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  if (std::abs(v(0)) > 1e-12 * v.norm())
    fail(ErrorCode::NormalizationError, "direction must be transverse to e_1 (no e_1 component)");

  // Normalisation probes: span{e_2..e_d} misses the domain, and the slice
  // C e_1 is exactly the upper half-plane.
  std::vector<CVector> outside, inside;
  outside.push_back(zeros(d));
  if (d > 1) {
    CMatrix tail = CMatrix::Zero(d, d - 1);
    for (int k = 1; k < d; ++k) tail(k, k - 1) = 1.0;
    auto dirs = subspace_directions(tail, 7);
    for (std::size_t k = 0; k < dirs.size(); ++k) outside.push_back(std::pow(4.0, static_cast<double>(k % 4) - 1.0) * dirs[k]);
  }
  for (cd z : {cd(1.0, -0.5), cd(-3.0, -1e-3), cd(0.0, -2.0), cd(2.0, 0.0)}) outside.push_back(z * unit(d, 0));
  for (cd z : {cd(0.0, 1e-3), cd(1.0, 0.5), cd(-5.0, 2.0), cd(0.0, 1e3)}) inside.push_back(z * unit(d, 0));
  for (const auto& z : outside)
    if (domain.contains(z)) fail(ErrorCode::NormalizationError, "domain meets span{e_2..e_d} or the lower half of C e_1");
  for (const auto& z : inside)
    if (!domain.contains(z)) fail(ErrorCode::NormalizationError, "slice C e_1 is not the upper half-plane");

  auto rs = linspace(r_min, r_max, n);
  std::vector<double> logd(n);
  parallel_for(n, [&](std::size_t k) {
    CVector z = zeros(d);
    z(0) = cd(0.0, std::exp(rs[k]));
    auto dd = delta_dir(domain, z, v, tol);
    if (!dd) fail(ErrorCode::UnboundedDomain, "complex line escapes the clip radius");
    logd[k] = std::log(*dd);
  });
  return fit_slope(rs, logd);
}

}  // namespace kobayashi
