#include "kobayashi/detectors.hpp"

#include "kobayashi/boundary.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kobayashi {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ConsistentWithSPC: return "ConsistentWithSPC";
    case Verdict::Inconsistent: return "Inconsistent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify_exponent(const ExponentFit& fit, double target, const Tolerances& tol) {
  if (!(fit.half_width <= tol.spc_max_half_width)) return Verdict::Inconclusive;
  double band = std::max(tol.spc_band_sigmas * fit.half_width, tol.spc_exponent_floor);
  return std::abs(fit.exponent - target) <= band ? Verdict::ConsistentWithSPC : Verdict::Inconsistent;
}

std::vector<double> default_spc_grid() { return geomspace(1e-6, 1e-2, 24); }

SpcVerdict spc_exponent(const ConvexDomain& domain, const CVector& xi, const CVector& v,
                        const std::vector<double>& r_grid, const Tolerances& tol) {
  SupportingFunctional P = supporting_functional(domain, xi, tol);
  if (P.non_smooth) fail(ErrorCode::NormalUndefined, "boundary point is not smooth");
  const CVector n = -P.outward_normal;
  if (v.size() != xi.size()) fail(ErrorCode::InvalidSpec, "direction has wrong dimension");
  if (v.norm() == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  if (std::abs(inner(v, n)) > tol.tangential_tol * v.norm())
    fail(ErrorCode::NotTangential, "direction is not complex tangential at the boundary point");

  std::vector<double> logr, logd(r_grid.size());
  for (double r : r_grid) {
    if (!(r > 0.0)) fail(ErrorCode::GridError, "radii must be positive");
    logr.push_back(std::log(r));
  }
  parallel_for(r_grid.size(), [&](std::size_t k) {
    auto dd = delta_dir(domain, CVector(xi + r_grid[k] * n), v, tol);
    if (!dd) fail(ErrorCode::UnboundedDomain, "tangential complex line escapes the clip radius");
    logd[k] = std::log(*dd);
  });
  SpcVerdict out;
  out.fit = fit_slope(logr, logd);
  out.verdict = classify_exponent(out.fit, out.target, tol);
  return out;
}

ScanResult spc_global_scan(const ConvexDomain& domain, std::size_t n_boundary_samples, const ScanOptions& options,
                           const Tolerances& tol) {
  const int d = domain.dim();
  if (d < 2) fail(ErrorCode::InvalidSpec, "tangential directions need d >= 2");
  CVector c;
  if (options.center) {
    c = *options.center;
  } else if (auto p = interior_point_in_ball(domain, domain.clip_radius())) {
    c = *p;
  } else {
    fail(ErrorCode::EmptyClip, "no interior point found");
  }
  if (!domain.contains(c)) fail(ErrorCode::NotInterior, "scan centre must be interior");

  std::vector<CVector> xis = options.extra_points;
  for (const auto& u : sphere_directions(d, n_boundary_samples)) {
    auto hit = ray_boundary_hit(domain, c, u, tol);
    if (!hit) fail(ErrorCode::UnboundedDomain, "scan needs a bounded domain");
    xis.push_back(hit->point);
  }

  ScanResult out;
  bool have = false;
  for (std::size_t i = 0; i < xis.size(); ++i) {
    CMatrix frame;
    try {
      SupportingFunctional P = supporting_functional(domain, xis[i], tol);
      if (P.non_smooth) {
        ++out.skipped;
        continue;
      }
      CMatrix nmat(d, 1);
      nmat.col(0) = P.outward_normal;
      frame = orthonormal_complement(nmat, d);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NormalUndefined && e.code() != ErrorCode::NotBoundary) throw;
      ++out.skipped;
      continue;
    }
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
      CVector v = frame.col(j);
      SpcVerdict s;
      try {
        s = spc_exponent(domain, xis[i], v, options.r_grid, tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnboundedDomain && e.code() != ErrorCode::NotInterior) throw;
        ++out.skipped;
        continue;
      }
      out.rows.push_back({i, static_cast<std::size_t>(j), s.fit.exponent, s.fit.half_width});
      if (!have || s.fit.exponent < out.worst.fit.exponent) {
        have = true;
        out.worst = s;
        out.witness_xi = xis[i];
        out.witness_v = v;
      }
    }
  }
  if (!have) fail(ErrorCode::InternalError, "no boundary point admitted an exponent fit");
  return out;
}

double squeezing_lower_bound(const ConvexDomain& domain, const CVector& p, const Tolerances& tol) {
  if (!domain.contains(p)) fail(ErrorCode::NotInterior, "point must be interior");
  const int d = domain.dim();
  auto dirs = sphere_directions(d, tol.squeezing_directions);
  std::vector<double> t(dirs.size());
  std::vector<char> bounded(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) {
    auto hit = ray_boundary_hit(domain, p, dirs[k], tol);
    bounded[k] = hit.has_value();
    t[k] = hit ? hit->parameter : 0.0;
  });
  if (std::find(bounded.begin(), bounded.end(), 0) != bounded.end())
    fail(ErrorCode::UnboundedDomain, "squeezing bound needs a bounded domain");

  double r = std::min(*std::min_element(t.begin(), t.end()), delta_sampled(domain, p, tol).distance);
  std::size_t arg = std::max_element(t.begin(), t.end()) - t.begin();
  // Compass ascent for the circumscribed radius.
  RVector w = to_real(dirs[arg]);
  double R = t[arg];
  for (double step = 0.05; step >= tol.descent_min_step;) {
    bool improved = false;
    for (Eigen::Index k = 0; k < w.size() && !improved; ++k)
      for (double s : {1.0, -1.0}) {
        RVector c = w;
        c(k) += s * step;
        c /= c.norm();
        auto hit = ray_boundary_hit(domain, p, from_real(c), tol);
        if (!hit) fail(ErrorCode::UnboundedDomain, "squeezing bound needs a bounded domain");
        if (hit->parameter > R) {
          R = hit->parameter;
          w = c;
          improved = true;
          break;
        }
      }
    if (!improved) step *= 0.5;
  }
  return std::min(1.0, r / R);
}

namespace {

// phi = -(d+1) log(1 - |z|^2) in real coordinates.
double bergman_potential(const RVector& x) {
  const double d = static_cast<double>(x.size() / 2);
  return -(d + 1.0) * std::log1p(-x.squaredNorm());
}

// Complex Hessian G_ij = d_i dbar_j phi from a Richardson-extrapolated real
// Hessian.
CMatrix levi_matrix(const RVector& x, double h) {
  const Eigen::Index n = x.size();
  auto hessian = [&](double s) {
    Eigen::MatrixXd H(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a; b < n; ++b) {
        auto f = [&](double da, double db) {
          RVector y = x;
          y(a) += da;
          y(b) += db;
          return bergman_potential(y);
        };
        H(a, b) = H(b, a) = (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0 * s * s);
      }
    return H;
  };
  Eigen::MatrixXd H = (4.0 * hessian(h / 2) - hessian(h)) / 3.0;
  const Eigen::Index d = n / 2;
  CMatrix G(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      double xx = H(2 * i, 2 * j), yy = H(2 * i + 1, 2 * j + 1);
      double xy = H(2 * i, 2 * j + 1), yx = H(2 * i + 1, 2 * j);
      G(i, j) = 0.25 * cd(xx + yy, xy - yx);
    }
  return G;
}

}  // namespace

double ball_bergman_curvature(int dim, const CVector& z, const CVector& v, const Tolerances& tol) {
  check_dim(dim);
  if (z.size() != dim || v.size() != dim) fail(ErrorCode::InvalidSpec, "point or direction has wrong dimension");
  if (!(z.norm() < 0.9)) fail(ErrorCode::OutOfDomain, "point must satisfy |z| < 0.9");
  if (v.norm() == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  const double h = tol.bergman_metric_step;
  const RVector x = to_real(z), rv = to_real(v), riv = to_real(CVector(cd(0.0, 1.0) * v));

  auto G = [&](const RVector& y) { return levi_matrix(y, h); };
  auto f = [&](const RVector& y) { return (v.transpose() * G(y) * v.conjugate())(0, 0).real(); };

  // Second directional derivatives along v and iv, Richardson in the step.
  auto second = [&](const RVector& dir, double s) {
    return (f(x + s * dir) - 2.0 * f(x) + f(x - s * dir)) / (s * s);
  };
  auto first = [&](const RVector& dir, double s) {
    CMatrix Gp = G(x + s * dir), Gm = G(x - s * dir);
    return CVector((Gp.transpose() * v - Gm.transpose() * v) / (2.0 * s));
  };
  const double s = tol.bergman_curvature_step;
  double dvv = (4.0 * second(rv, s / 2) - second(rv, s)) / 3.0;
  double diviv = (4.0 * second(riv, s / 2) - second(riv, s)) / 3.0;
  CVector dv = (4.0 * first(rv, s / 2) - first(rv, s)) / 3.0;
  CVector div = (4.0 * first(riv, s / 2) - first(riv, s)) / 3.0;

  const double term1 = 0.25 * (dvv + diviv);  // d_v dbar_v of g(v, vbar)
  const CVector c = 0.5 * (dv - cd(0.0, 1.0) * div);  // d_v of G^T v
  const CMatrix G0 = G(x);
  const double term2 = (c.transpose() * G0.inverse() * c.conjugate())(0, 0).real();
  const double g = f(x);
  return 2.0 * (term2 - term1) / (g * g);
}

}  // namespace kobayashi
