#include "kobayashi/metrics.hpp"

#include "kobayashi/boundary.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace kobayashi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1 - |z|^2 without cancellation near the sphere.
double one_minus_sq(double r) { return (1.0 - r) * (1.0 + r); }

void check_same_dim(const CVector& z, const CVector& w, int dim) {
  if (z.size() != dim || w.size() != dim) fail(ErrorCode::InvalidSpec, "points must lie in C^" + std::to_string(dim));
}

// Sum over j<k of |a_j b_k - a_k b_j|^2, the Lagrange defect |a|^2|b|^2 - |<a,b>|^2.
// Written in terms of a and h = b - a so it stays accurate when b is close to a.
double gram_defect(const CVector& a, const CVector& b) {
  CVector h = b - a;
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j)
    for (Eigen::Index k = j + 1; k < a.size(); ++k) s += std::norm(a(j) * h(k) - a(k) * h(j));
  return s;
}

// Strict lexicographic order on the real coordinates. Evaluating every
// distance with its arguments in this order makes it symmetric bit for bit.
bool precedes(const CVector& a, const CVector& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

double dist_halfplane(cd z, cd w) {
  if (w.real() < z.real() || (w.real() == z.real() && w.imag() < z.imag())) std::swap(z, w);
  if (!(z.imag() > 0.0) || !(w.imag() > 0.0)) fail(ErrorCode::OutOfDomain, "points must lie in the upper half-plane");
  double x = std::norm(z - w) / (2.0 * z.imag() * w.imag());
  return 0.5 * std::log1p(x + std::sqrt(x * (x + 2.0)));
}

double dist_disk(cd z, cd w) {
  CVector a(1), b(1);
  a << z;
  b << w;
  return dist_ball(a, b);
}

double dist_ball(const CVector& z, const CVector& w) {
  if (z.size() != w.size()) fail(ErrorCode::InvalidSpec, "points have different dimensions");
  double nz = z.norm(), nw = w.norm();
  if (!(nz < 1.0) || !(nw < 1.0)) fail(ErrorCode::OutOfDomain, "points must lie in the unit ball");
  if (precedes(w, z)) return dist_ball(w, z);
  // |1 - <z,w>|^2 - (1-|z|^2)(1-|w|^2) = |z-w|^2 - (|z|^2|w|^2 - |<z,w>|^2)
  double D = (z - w).squaredNorm() - gram_defect(z, w);
  D = std::max(D, 0.0);
  return std::asinh(std::sqrt(D / (one_minus_sq(nz) * one_minus_sq(nw))));
}

double dist_ball(int dim, const CVector& z, const CVector& w) {
  check_same_dim(z, w, dim);
  return dist_ball(z, w);
}

double dist_siegel(const CVector& z, const CVector& w) {
  if (z.size() != w.size()) fail(ErrorCode::InvalidSpec, "points have different dimensions");
  const Eigen::Index d = z.size();
  CVector u = z.tail(d - 1), v = w.tail(d - 1);
  double rz = z(0).imag() - u.squaredNorm();
  double rw = w(0).imag() - v.squaredNorm();
  if (!(rz > 0.0) || !(rw > 0.0)) fail(ErrorCode::OutOfDomain, "points must lie in the Siegel domain");
  if (precedes(w, z)) return dist_siegel(w, z);
  // |r(z,w)|^2 - r(z,z) r(w,w) with r(z,w) = (z_1 - conj w_1)/(2i) - <u,v>,
  // expanded so that every term vanishes individually as w -> z.
  double a = z(0).imag(), b = w(0).imag();
  double dx = z(0).real() - w(0).real();
  double D = std::norm(z(0) - w(0)) / 4.0 + 0.5 * (a + b) * (u - v).squaredNorm() +
             0.5 * (a - b) * (v.squaredNorm() - u.squaredNorm()) + dx * inner(u, v).imag() - gram_defect(u, v);
  D = std::max(D, 0.0);
  return std::asinh(std::sqrt(D / (rz * rw)));
}

double dist_siegel(int dim, const CVector& z, const CVector& w) {
  check_same_dim(z, w, dim);
  return dist_siegel(z, w);
}

CVector cayley_to_ball(const CVector& w) {
  const cd i(0.0, 1.0);
  cd den = w(0) + i;
  CVector z(w.size());
  z(0) = (w(0) - i) / den;
  for (Eigen::Index j = 1; j < w.size(); ++j) z(j) = 2.0 * w(j) / den;
  return z;
}

CVector cayley_from_ball(const CVector& z) {
  const cd i(0.0, 1.0);
  cd den = 1.0 - z(0);
  CVector w(z.size());
  w(0) = i * (1.0 + z(0)) / den;
  for (Eigen::Index j = 1; j < z.size(); ++j) w(j) = i * z(j) / den;
  return w;
}

namespace {

// Ball around the domain: centre from the bounding box of sampled boundary
// points, radius the farthest boundary point found from that centre.
std::optional<std::pair<CVector, double>> circumscribed_ball(const ConvexDomain& domain, const CVector& seed,
                                                             const Tolerances& tol) {
  const int d = domain.dim();
  auto dirs = sphere_directions(d, tol.delta_directions);
  RVector lo = RVector::Constant(2 * d, kInf), hi = RVector::Constant(2 * d, -kInf);
  for (const auto& u : dirs) {
    auto hit = ray_boundary_hit(domain, seed, u, tol);
    if (!hit) return std::nullopt;
    RVector x = to_real(hit->point);
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  CVector c = from_real(RVector(0.5 * (lo + hi)));
  if (!domain.contains(c)) c = seed;

  std::vector<double> far(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    auto hit = ray_boundary_hit(domain, c, dirs[k], tol);
    if (!hit) return std::nullopt;
    far[k] = hit->parameter;
  }
  std::size_t arg = std::max_element(far.begin(), far.end()) - far.begin();
  // Compass ascent on the direction sphere.
  RVector w = to_real(dirs[arg]);
  double best = far[arg];
  for (double step = 0.05; step >= tol.descent_min_step;) {
    bool improved = false;
    for (Eigen::Index k = 0; k < w.size() && !improved; ++k)
      for (double s : {1.0, -1.0}) {
        RVector cand = w;
        cand(k) += s * step;
        cand /= cand.norm();
        auto hit = ray_boundary_hit(domain, c, from_real(cand), tol);
        if (!hit) return std::nullopt;
        if (hit->parameter > best) {
          best = hit->parameter;
          w = cand;
          improved = true;
          break;
        }
      }
    if (!improved) step *= 0.5;
  }
  return std::pair{c, best * (1.0 + tol.circumscribed_inflate)};
}

}  // namespace

BoundValue lower_bound_hyperplane(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                                  const Tolerances& tol) {
  if (!domain.contains(z1) || !domain.contains(z2)) fail(ErrorCode::NotInterior, "points must be interior");
  BoundValue out{0.0, "none", false};
  if ((z1 - z2).norm() == 0.0) {
    out.witness = "coincident points";
    return out;
  }
  auto consider = [&](double value, const std::string& witness) {
    if (std::isfinite(value) && value > out.value) {
      out.value = value;
      out.witness = witness;
      out.separated = true;
    }
  };

  // Boundary points on the complex line L through z1, z2 and near the
  // points themselves.
  std::vector<std::pair<CVector, bool>> xis;  // (point, lies on L)
  const CVector u = (z2 - z1) / (z2 - z1).norm();
  if (auto h = ray_boundary_hit(domain, z1, -u, tol)) xis.push_back({h->point, true});
  if (auto h = ray_boundary_hit(domain, z2, u, tol)) xis.push_back({h->point, true});
  for (const CVector* z : {&z1, &z2}) {
    try {
      xis.push_back({delta_sampled(domain, *z, tol).point, false});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnboundedDomain) throw;
    }
  }
  const CVector mid = 0.5 * (z1 + z2);
  const std::size_t n = tol.lower_bound_samples;
  for (std::size_t k = 0; k < n; ++k) {
    double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    if (auto h = ray_boundary_hit(domain, mid, std::polar(1.0, th) * u, tol)) xis.push_back({h->point, true});
  }

  for (const auto& [xi, on_line] : xis) {
    if (on_line) {
      double a = (z1 - xi).norm(), b = (z2 - xi).norm();
      if (a > 0.0 && b > 0.0) consider(0.5 * std::abs(std::log(a / b)), "line boundary point");
    }
    SupportingFunctional P;
    try {
      P = supporting_functional(domain, xi, tol);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotBoundary || e.code() == ErrorCode::NormalUndefined) continue;
      throw;
    }
    cd p1 = P(z1), p2 = P(z2);
    if (p1.imag() > 0.0 && p2.imag() > 0.0) consider(dist_halfplane(p1, p2), "supporting hyperplane");
  }

  if (auto ball = circumscribed_ball(domain, mid, tol)) {
    const auto& [c, R] = *ball;
    CVector a = (z1 - c) / R, b = (z2 - c) / R;
    if (a.norm() < 1.0 && b.norm() < 1.0) consider(dist_ball(a, b), "circumscribed ball");
  }
  return out;
}

namespace {

// The complex line z1 + C u through the two points, seen as a planar convex
// domain S in the coordinate c.
struct Slice {
  const ConvexDomain& domain;
  CVector z1;
  CVector u;
  const Tolerances& tol;

  CVector at(cd c) const { return z1 + c * u; }
  bool contains(cd c) const { return domain.contains(at(c)); }

  // Distance from c to the boundary of S, and the nearest boundary point.
  std::optional<std::pair<double, cd>> delta(cd c) const {
    if (!contains(c)) return std::nullopt;
    auto d = delta_dir_detail(domain, at(c), u, tol);
    if (!d) return std::pair{kInf, c};
    return std::pair{d->value, c + d->value * std::polar(1.0, d->theta)};
  }
};

// Kobayashi distance between a and b inside the disk B(m, rho).
double disk_distance(cd m, double rho, cd a, cd b) {
  cd x = (a - m) / rho, y = (b - m) / rho;
  if (!(std::abs(x) < 1.0) || !(std::abs(y) < 1.0)) return kInf;
  return dist_disk(x, y);
}

double link_bound(const Slice& S, cd a, cd b, bool tangent) {
  const cd m = 0.5 * (a + b);
  auto dm = S.delta(m);
  if (!dm) return kInf;
  if (!std::isfinite(dm->first)) return 0.0;
  const double shrink = 1.0 - S.tol.disk_shrink;
  double best = disk_distance(m, dm->first * shrink, a, b);
  if (!tangent) return best;

  // Largest disk tangent to the slice boundary at the point q nearest m.
  const cd q = dm->second;
  const double r0 = std::abs(m - q);
  if (r0 == 0.0) return best;
  const cd nu = (m - q) / r0;
  auto fits = [&](double rho) {
    auto d = S.delta(q + rho * nu);
    return d && d->first >= rho * (1.0 - 1e-7);
  };
  double lo = r0, hi = 2.0 * r0;
  while (fits(hi) && hi < S.domain.clip_radius()) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 60 && hi - lo > 1e-7 * lo; ++it) {
    double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  const cd c = q + lo * nu;
  if (auto dc = S.delta(c); dc && std::isfinite(dc->first))
    best = std::min(best, disk_distance(c, dc->first * shrink, a, b));
  return best;
}

// Exact value when S is a half-plane: probe the tangent line at the nearest
// boundary point far out in both directions.
std::optional<double> half_plane_slice(const Slice& S, double length) {
  auto d0 = S.delta(0.0);
  if (!d0 || !std::isfinite(d0->first)) return std::nullopt;
  const cd q = d0->second;
  const cd nu = -q / std::abs(q);  // inward
  const double scale = std::max(d0->first, length);
  for (double s : {1.0, 10.0, 100.0, 1000.0})
    for (double sign : {1.0, -1.0}) {
      cd p = q + sign * s * scale * cd(0.0, 1.0) * nu;
      double eps = 1e-9 * (1.0 + std::abs(p));
      if (!S.contains(p + eps * nu) || S.contains(p - eps * nu)) return std::nullopt;
    }
  auto P = [&](cd c) { return cd(0.0, 1.0) * (c - q) * std::conj(nu); };
  return dist_halfplane(P(0.0), P(length));
}

}  // namespace

BoundValue upper_bound_chain(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                             const Tolerances& tol) {
  if (!domain.contains(z1) || !domain.contains(z2)) fail(ErrorCode::NotInterior, "points must be interior");
  const double length = (z2 - z1).norm();
  if (length == 0.0) return {0.0, "coincident points", true};
  Slice S{domain, z1, (z2 - z1) / length, tol};

  if (auto exact = half_plane_slice(S, length)) return {*exact, "half-plane slice", true};

  double best = kInf;
  std::size_t best_links = 0;
  double previous = kInf;
  for (std::size_t n = 1; n <= tol.chain_max_links; n *= 2) {
    const bool tangent = n <= tol.chain_tangent_links;
    double total = 0.0;
    for (std::size_t k = 0; k < n && std::isfinite(total); ++k) {
      double a = length * static_cast<double>(k) / static_cast<double>(n);
      double b = length * static_cast<double>(k + 1) / static_cast<double>(n);
      total += link_bound(S, a, b, tangent);
    }
    if (total < best) {
      best = total;
      best_links = n;
    }
    if (std::isfinite(previous) && std::isfinite(total) && previous - total < tol.chain_improvement) break;
    previous = std::min(previous, total);
  }
  return {best, "disk chain, " + std::to_string(best_links) + " links", std::isfinite(best)};
}

DistanceBounds dist_bounds(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                           const Tolerances& tol) {
  auto lo = lower_bound_hyperplane(domain, z1, z2, tol);
  auto up = upper_bound_chain(domain, z1, z2, tol);
  DistanceBounds b{lo.value, up.value, lo.witness, up.witness, lo.separated};
  if (b.lower > b.upper) {
    if (b.lower - b.upper > 1e-9 * (1.0 + b.upper))
      fail(ErrorCode::InternalError, "lower bound " + fmt(b.lower) + " exceeds upper bound " + fmt(b.upper));
    b.lower = b.upper;  // rounding between two exact evaluations
  }
  return b;
}

DistanceBounds infinitesimal_estimate(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                      const Tolerances& tol) {
  if (!domain.contains(z)) fail(ErrorCode::NotInterior, "point must be interior");
  const double nv = v.norm();
  if (nv == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  DistanceBounds out;
  auto dd = delta_dir(domain, z, v, tol);
  out.upper = dd ? nv / *dd : 0.0;
  out.upper_witness = "affine disk of radius delta(z;v)";

  // lower(h)/h is linear in h to leading order; extrapolate to h = 0.
  const std::vector<double> hs{1e-3, 1e-4, 1e-5};
  std::vector<double> ys;
  for (double h : hs) {
    CVector w = z + h * v;
    if (!domain.contains(w)) fail(ErrorCode::NotInterior, "z + h v left the domain");
    ys.push_back(lower_bound_hyperplane(domain, z, w, tol).value / h);
  }
  double mx = (hs[0] + hs[1] + hs[2]) / 3.0, my = (ys[0] + ys[1] + ys[2]) / 3.0;
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < 3; ++k) {
    sxx += (hs[k] - mx) * (hs[k] - mx);
    sxy += (hs[k] - mx) * (ys[k] - my);
  }
  double extrapolated = my - (sxy / sxx) * mx;
  out.lower = std::max(0.0, std::min(extrapolated, out.upper));
  out.lower_witness = "extrapolated hyperplane bound";
  out.separated = out.lower > 0.0;
  return out;
}

}  // namespace kobayashi
