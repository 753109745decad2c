#include "kobayashi/boundary.hpp"

#include "kobayashi/errors.hpp"
#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace kobayashi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_interior(const ConvexDomain& domain, const CVector& z) {
  if (z.size() != domain.dim()) fail(ErrorCode::InvalidSpec, "point has wrong dimension");
  if (!domain.contains(z)) fail(ErrorCode::NotInterior, "point is not interior to " + domain.describe());
}

// Hit parameter along a unit direction, +inf when the ray escapes.
double hit_distance(const ConvexDomain& domain, const CVector& z, const CVector& u, const Tolerances& tol,
                    CVector* point = nullptr) {
  auto hit = ray_boundary_hit(domain, z, u, tol);
  if (!hit) return kInf;
  if (point) *point = hit->point;
  return hit->parameter;
}

// Orthonormal basis of the tangent space to the unit sphere of R^n at w.
std::vector<RVector> sphere_tangents(const RVector& w) {
  std::vector<RVector> out;
  const Eigen::Index n = w.size();
  std::vector<RVector> basis{w};
  for (Eigen::Index k = 0; k < n && static_cast<Eigen::Index>(out.size()) < n - 1; ++k) {
    RVector e = RVector::Zero(n);
    e(k) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) e -= e.dot(b) * b;
    double ne = e.norm();
    if (ne > 1e-6) {
      e /= ne;
      basis.push_back(e);
      out.push_back(e);
    }
  }
  return out;
}

struct Candidate {
  double distance;
  CVector direction;
  CVector point;
};

// Local refinement of a closest-point direction inside z + span(basis):
// outward-normal steps, then compass search on the sphere of directions.
Candidate refine(const ConvexDomain& domain, const CVector& z, const CMatrix& basis, Candidate c,
                 const Tolerances& tol) {
  const CMatrix proj = basis * basis.adjoint();
  for (int it = 0; it < 50 && std::isfinite(c.distance); ++it) {
    CVector g = proj * domain.margin_gradient(c.point);
    double ng = g.norm();
    if (ng == 0.0 || !std::isfinite(ng)) break;
    CVector u = -g / ng;
    CVector p;
    double d = hit_distance(domain, z, u, tol, &p);
    if (!(d < c.distance * (1.0 - 1e-15))) break;
    c = {d, u, p};
  }

  RVector w = to_real(CVector(basis.adjoint() * c.direction));
  w /= w.norm();
  auto tangents = sphere_tangents(w);
  for (double step = 0.05; step >= tol.descent_min_step;) {
    bool improved = false;
    for (const auto& tau : tangents) {
      for (double sign : {1.0, -1.0}) {
        RVector cand = w + sign * step * tau;
        cand /= cand.norm();
        CVector u = basis * from_real(cand);
        CVector p;
        double d = hit_distance(domain, z, u, tol, &p);
        if (d < c.distance) {
          c = {d, u, p};
          w = cand;
          improved = true;
        }
      }
      if (improved) break;
    }
    if (improved)
      tangents = sphere_tangents(w);
    else
      step *= 0.5;
  }
  return c;
}

ClosestPoint closest_search(const ConvexDomain& domain, const CVector& z, const CMatrix& basis,
                            const Tolerances& tol) {
  require_interior(domain, z);
  auto dirs = subspace_directions(basis, tol.delta_directions);
  std::vector<double> dist(dirs.size());
  std::vector<CVector> points(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t i) { dist[i] = hit_distance(domain, z, dirs[i], tol, &points[i]); });

  std::vector<std::size_t> order(dirs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return dist[a] < dist[b]; });
  if (!std::isfinite(dist[order[0]])) fail(ErrorCode::UnboundedDomain, "no boundary within the clip radius");

  // Up to three well separated seeds among the near-best samples.
  std::vector<std::size_t> seeds{order[0]};
  for (std::size_t j = 1; j < order.size() && seeds.size() < 3; ++j) {
    std::size_t i = order[j];
    if (dist[i] > 1.1 * dist[order[0]]) break;
    bool separated = std::all_of(seeds.begin(), seeds.end(),
                                 [&](std::size_t s) { return inner(dirs[i], dirs[s]).real() < std::cos(0.3); });
    if (separated) seeds.push_back(i);
  }

  std::vector<Candidate> refined;
  for (std::size_t s : seeds) refined.push_back(refine(domain, z, basis, {dist[s], dirs[s], points[s]}, tol));
  std::size_t best = 0;
  for (std::size_t k = 1; k < refined.size(); ++k)
    if (refined[k].distance < refined[best].distance) best = k;

  ClosestPoint out{refined[best].distance, refined[best].point, false};
  for (std::size_t k = 0; k < refined.size(); ++k) {
    if (k == best) continue;
    bool close_value = refined[k].distance <= out.distance * (1.0 + tol.closest_tie_tol);
    bool far_point = (refined[k].point - out.point).norm() > 1e-6 * (1.0 + out.distance);
    if (close_value && far_point) out.ambiguous = true;
  }
  return out;
}

}  // namespace

std::optional<BoundaryHit> ray_boundary_hit(const ConvexDomain& domain, const CVector& z, const CVector& u,
                                            const Tolerances& tol) {
  require_interior(domain, z);
  if (u.size() != z.size()) fail(ErrorCode::InvalidSpec, "direction has wrong dimension");
  if (u.norm() == 0.0) fail(ErrorCode::ZeroDirection, "ray direction is zero");

  double lo = 0.0, hi = tol.initial_step;
  if (domain.contains(z + hi * u)) {
    for (;;) {
      lo = hi;
      hi *= 2.0;
      CVector p = z + hi * u;
      if (p.norm() > domain.clip_radius() || !std::isfinite(hi)) return std::nullopt;
      if (!domain.contains(p)) break;
    }
  }
  for (int k = 0; k < tol.max_bisection_steps && hi - lo > tol.bisection_rel_width * hi; ++k) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (domain.contains(z + mid * u) ? lo : hi) = mid;
  }
  BoundaryHit hit;
  hit.parameter = 0.5 * (lo + hi);
  hit.point = z + hit.parameter * u;
  hit.residual = domain.margin(hit.point);
  return hit;
}

double delta(const ConvexDomain& domain, const CVector& z, const Tolerances& tol) {
  require_interior(domain, z);
  if (auto d = domain.closed_form_delta(z)) return *d;
  return delta_sampled(domain, z, tol).distance;
}

ClosestPoint delta_sampled(const ConvexDomain& domain, const CVector& z, const Tolerances& tol) {
  return closest_search(domain, z, CMatrix::Identity(domain.dim(), domain.dim()), tol);
}

ClosestPoint closest_in_subspace(const ConvexDomain& domain, const CVector& z, const CMatrix& basis,
                                 const Tolerances& tol) {
  if (basis.cols() == 0) fail(ErrorCode::InvalidSpec, "empty subspace");
  return closest_search(domain, z, basis, tol);
}

std::optional<DirectionalDelta> delta_dir_detail(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                                 const Tolerances& tol) {
  require_interior(domain, z);
  if (v.size() != z.size()) fail(ErrorCode::InvalidSpec, "direction has wrong dimension");
  double nv = v.norm();
  if (nv == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  const CVector vn = v / nv;
  auto f = [&](double th) { return hit_distance(domain, z, std::polar(1.0, th) * vn, tol); };

  const int n = std::max(tol.theta_grid, 3);
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<double> grid(n);
  parallel_for(n, [&](std::size_t k) { grid[k] = f(h * static_cast<double>(k)); });
  int arg = static_cast<int>(std::min_element(grid.begin(), grid.end()) - grid.begin());
  if (!std::isfinite(grid[arg])) return std::nullopt;

  // Golden-section on the bracket around the best grid angle.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = h * (arg - 1), b = h * (arg + 1);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol.golden_width) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  double theta = h * arg, best = grid[arg];
  for (auto [x, fx] : {std::pair{x1, f1}, std::pair{x2, f2}})
    if (fx < best) {
      best = fx;
      theta = x;
    }
  theta = std::remainder(theta, 2.0 * std::numbers::pi);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  DirectionalDelta out;
  out.value = best;
  out.theta = theta;
  out.point = z + best * std::polar(1.0, theta) * vn;
  return out;
}

std::optional<double> delta_dir(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                const Tolerances& tol) {
  auto d = delta_dir_detail(domain, z, v, tol);
  if (!d) return std::nullopt;
  return d->value;
}

CVector inward_normal(const ConvexDomain& domain, const CVector& xi) {
  CVector g = domain.margin_gradient(xi);
  double n = g.norm();
  if (n == 0.0 || !std::isfinite(n)) fail(ErrorCode::NormalUndefined, "margin gradient vanishes");
  return g / n;
}

SupportingFunctional supporting_functional(const ConvexDomain& domain, const CVector& xi, const Tolerances& tol) {
  if (xi.size() != domain.dim()) fail(ErrorCode::InvalidSpec, "point has wrong dimension");
  CVector g = domain.margin_gradient(xi);
  double ng = g.norm();
  double m = domain.margin(xi);
  double gap = ng > 0.0 ? std::abs(m) / ng : std::abs(m);
  if (gap > tol.boundary_tol * (1.0 + xi.norm()))
    fail(ErrorCode::NotBoundary, "point is not within tolerance of the boundary");
  if (ng == 0.0) fail(ErrorCode::NormalUndefined, "margin gradient vanishes");
  SupportingFunctional P;
  P.xi = xi;
  P.outward_normal = -g / ng;
  P.non_smooth = domain.active_pieces(xi, tol.boundary_tol * (1.0 + xi.norm())) > 1;
  return P;
}

std::optional<CVector> interior_point_in_ball(const ConvexDomain& domain, double R) {
  const int d = domain.dim();
  CVector z0 = zeros(d);
  if (domain.contains(z0) && R > 0.0) return z0;
  auto dirs = sphere_directions(d, 4 * d + 252);
  for (double s = 0.5; s > 1e-9; s *= 0.5)
    for (const auto& u : dirs) {
      CVector z = s * R * u;
      if (domain.contains(z)) return z;
    }
  return std::nullopt;
}

}  // namespace kobayashi
