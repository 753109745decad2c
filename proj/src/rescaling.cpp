#include "kobayashi/rescaling.hpp"

#include "kobayashi/boundary.hpp"
#include "kobayashi/errors.hpp"
#include "kobayashi/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kobayashi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double disk_margin(const ConvexDomain& domain, int i, const Tolerances& tol) {
  const int d = domain.dim();
  CVector z0 = zeros(d);
  if (!domain.contains(z0)) return -1.0;
  double worst = kInf;
  for (int k = 0; k < tol.kd_disk_samples; ++k) {
    double th = 2.0 * std::numbers::pi * k / tol.kd_disk_samples;
    auto hit = ray_boundary_hit(domain, z0, std::polar(1.0, th) * unit(d, i), tol);
    worst = std::min(worst, hit ? hit->parameter - 1.0 : domain.clip_radius());
  }
  return worst;
}

}  // namespace

double plane_sup_margin(const ConvexDomain& domain, int i, int upto, const Tolerances& tol) {
  const int d = domain.dim();
  const int free = 2 * (upto - i - 1);
  const CVector base = unit(d, i);
  auto point = [&](const RVector& w) {
    CVector z = base;
    for (int k = 0; k < free / 2; ++k) z(i + 1 + k) = cd(w(2 * k), w(2 * k + 1));
    return z;
  };
  RVector w = RVector::Zero(free);
  double best = domain.margin(base);
  // Compass search for the concave margin; stop early once clearly positive.
  for (double step = 1.0; step >= tol.plane_search_tol && best <= 10.0 * tol.kd_margin_tol;) {
    bool improved = false;
    for (int k = 0; k < free && !improved; ++k)
      for (double s : {1.0, -1.0}) {
        RVector c = w;
        c(k) += s * step;
        CVector z = point(c);
        if (z.norm() > domain.clip_radius()) continue;
        double m = domain.margin(z);
        if (m > best) {
          best = m;
          w = c;
          improved = true;
          break;
        }
      }
    if (!improved) step *= 0.5;
  }
  return best;
}

KdReport kd_membership(const ConvexDomain& domain, const Tolerances& tol) {
  const int d = domain.dim();
  KdReport r;
  r.passes = true;
  for (int i = 0; i < d; ++i) {
    double m = disk_margin(domain, i, tol);
    r.disk_inclusions.push_back({m >= -tol.kd_margin_tol, m});
    r.passes = r.passes && r.disk_inclusions.back().pass;
  }
  for (int i = 0; i < d; ++i) {
    double m = -plane_sup_margin(domain, i, d, tol);
    r.plane_exclusions.push_back({m >= -tol.kd_margin_tol, m});
    r.passes = r.passes && r.plane_exclusions.back().pass;
  }
  return r;
}

Normalization frankel_normalize(const ConvexDomain& domain, const CVector& x, const Tolerances& tol) {
  const int d = domain.dim();
  if (x.size() != d) fail(ErrorCode::InvalidSpec, "basepoint has wrong dimension");
  if (!domain.contains(x)) fail(ErrorCode::NotInterior, "basepoint must be interior");

  Normalization out;
  CMatrix frame(d, 0);
  for (int k = 0; k < d; ++k) {
    CMatrix basis = k == 0 ? CMatrix(CMatrix::Identity(d, d)) : orthonormal_complement(frame, d);
    if (basis.cols() == 0) fail(ErrorCode::NormalizationError, "orthogonal complement collapsed");
    ClosestPoint cp = closest_in_subspace(domain, x, basis, tol);
    if (tol.strict_unique_closest && cp.ambiguous)
      fail(ErrorCode::DegenerateClosestPoint, "closest boundary point is not unique at step " + std::to_string(k + 1));
    CVector dir = cp.point - x;
    frame.conservativeResize(d, k + 1);
    frame.col(k) = dir / dir.norm();
    out.xis.push_back(cp.point);
  }

  // U has rows u_i^*, so U(xi_i - x) = |xi_i - x| e_i.
  CMatrix U = frame.adjoint();
  CMatrix Lambda = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    auto dd = delta_dir(domain, x, out.xis[k] - x, tol);
    if (!dd) fail(ErrorCode::NormalizationError, "complex line through the basepoint is unbounded");
    out.deltas.push_back(*dd);
    Lambda(k, k) = 1.0 / *dd;
  }
  out.map = AffineMap(Lambda * U, x, zeros(d));
  auto image = make_affine_image(out.map, std::make_shared<ConvexDomain>(domain));
  out.report = kd_membership(*image, tol);
  return out;
}

namespace {

// Complex-orthogonal complement of the outward normal at xi inside span(H).
CMatrix shrink_subspace(const ConvexDomain& domain, const CMatrix& H, const CVector& xi, const Tolerances& tol) {
  SupportingFunctional P = supporting_functional(domain, xi, tol);
  CVector n = H * (H.adjoint() * P.outward_normal);
  if (n.norm() < 1e-12) fail(ErrorCode::HypothesisError, "supporting normal is orthogonal to the subspace");
  n /= n.norm();
  // Complement of n within span(H).
  CMatrix out(H.rows(), 0);
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    CVector v = H.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      v -= inner(v, n) * n;
      for (Eigen::Index c = 0; c < out.cols(); ++c) v -= inner(v, CVector(out.col(c))) * CVector(out.col(c));
    }
    double nv = v.norm();
    if (nv > 1e-8 && out.cols() < H.cols() - 1) {
      out.conservativeResize(Eigen::NoChange, out.cols() + 1);
      out.col(out.cols() - 1) = v / nv;
    }
  }
  return out;
}

}  // namespace

SliceExtension slice_extend_normalization(const ConvexDomain& domain, const Tolerances& tol) {
  const int d = domain.dim();
  if (d < 2) fail(ErrorCode::HypothesisError, "slice extension needs d >= 2");

  // Hypotheses: e_1 + span{e_2..e_d} misses the domain, and the slice
  // span{e_1, e_2} is in K_2.
  if (plane_sup_margin(domain, 0, d, tol) > tol.kd_margin_tol)
    fail(ErrorCode::HypothesisError, "domain meets e_1 + span{e_2..e_d}");
  for (int i = 0; i < 2; ++i)
    if (disk_margin(domain, i, tol) < -tol.kd_margin_tol)
      fail(ErrorCode::HypothesisError, "unit disk along e_" + std::to_string(i + 1) + " is not contained");
  if (plane_sup_margin(domain, 1, 2, tol) > tol.kd_margin_tol)
    fail(ErrorCode::HypothesisError, "e_2 is interior");

  SliceExtension out;
  out.xis = {unit(d, 0), unit(d, 1)};
  CMatrix H = CMatrix::Zero(d, d - 1);
  for (int k = 1; k < d; ++k) H(k, k - 1) = 1.0;
  // e_2 is a boundary point up to the margin tolerance; project it there.
  Tolerances loose = tol;
  loose.boundary_tol = std::max(tol.boundary_tol, tol.kd_margin_tol);
  H = shrink_subspace(domain, H, unit(d, 1), loose);
  for (int k = 2; k < d; ++k) {
    ClosestPoint cp = closest_in_subspace(domain, zeros(d), H, tol);
    out.xis.push_back(cp.point);
    if (k + 1 < d) H = shrink_subspace(domain, H, cp.point, tol);
  }

  CMatrix Xi(d, d);
  for (int k = 0; k < d; ++k) Xi.col(k) = out.xis[k];
  Eigen::FullPivLU<Eigen::MatrixXcd> lu{Eigen::MatrixXcd(Xi)};
  if (!lu.isInvertible()) fail(ErrorCode::NormalizationError, "boundary points do not span C^d");
  CMatrix A = lu.inverse();
  out.map = AffineMap::linear(A);
  out.identity_defect = std::max((A.col(0) - unit(d, 0)).cwiseAbs().maxCoeff(),
                                 (A.col(1) - unit(d, 1)).cwiseAbs().maxCoeff());
  auto image = make_affine_image(out.map, std::make_shared<ConvexDomain>(domain));
  out.report = kd_membership(*image, tol);
  return out;
}

namespace {

// Closed convex body K = closure(domain ∩ B_R(0)) seen from an interior point.
struct ClippedBody {
  const ConvexDomain& domain;
  double R;
  CVector center;
  const Tolerances& tol;

  double radial(const CVector& u) const {
    // |center + t u| = R
    double b = inner(center, u).real();
    double c = center.squaredNorm() - R * R;
    double t_ball = -b + std::sqrt(b * b - c);
    auto hit = ray_boundary_hit(domain, center, u, tol);
    return hit ? std::min(hit->parameter, t_ball) : t_ball;
  }
  CVector boundary(const CVector& u) const { return center + radial(u) * u; }
  // Outward unit normal of a supporting hyperplane at the boundary point in direction u.
  CVector normal(const CVector& u) const {
    double b = inner(center, u).real();
    double c = center.squaredNorm() - R * R;
    double t_ball = -b + std::sqrt(b * b - c);
    auto hit = ray_boundary_hit(domain, center, u, tol);
    if (hit && hit->parameter < t_ball) {
      CVector g = -domain.margin_gradient(center + hit->parameter * u);
      double ng = g.norm();
      if (ng > 0.0 && std::isfinite(ng)) return g / ng;
    }
    CVector p = center + t_ball * u;
    return p / p.norm();
  }
  bool contains_closed(const CVector& z) const {
    double slack = 1e-12 * (1.0 + R);
    return z.norm() <= R + slack && domain.margin(z) >= -slack;
  }
};

std::vector<RVector> tangents_of(const RVector& w) {
  std::vector<RVector> basis{w}, out;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    RVector e = RVector::Zero(w.size());
    e(k) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) e -= e.dot(b) * b;
    if (e.norm() > 1e-6) {
      e /= e.norm();
      basis.push_back(e);
      out.push_back(e);
    }
  }
  return out;
}

// Compass search over unit directions; sign = +1 maximises, -1 minimises.
template <class F>
std::pair<double, RVector> sphere_search(F f, RVector w, double value, double sign, double min_step,
                                         double start_step = 0.05) {
  auto tangents = tangents_of(w);
  for (double step = start_step; step >= min_step;) {
    bool improved = false;
    for (const auto& tau : tangents) {
      for (double s : {1.0, -1.0}) {
        RVector c = w + s * step * tau;
        c /= c.norm();
        double v = f(c);
        if (sign * (v - value) > 0.0) {
          // Keep going the same way with a growing step while it pays off.
          RVector dir = c - w;
          value = v;
          w = c;
          for (double grow = 2.0;; grow *= 2.0) {
            RVector e = w + grow * dir;
            e /= e.norm();
            double ve = f(e);
                if (!(sign * (ve - value) > 0.0)) break;
            value = ve;
            w = e;
          }
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
    if (improved)
      tangents = tangents_of(w);
    else
      step *= 0.5;
  }
  return {value, w};
}

// Distance from a to K, starting from the direction of the nearest sample.
std::pair<double, RVector> distance_to_body(const ClippedBody& K, const CVector& a, const RVector& seed,
                                            double seed_value, double min_step, double start_step = 0.05) {
  if (K.contains_closed(a)) return {0.0, seed};
  auto f = [&](const RVector& w) { return (a - K.boundary(from_real(w))).norm(); };
  return sphere_search(f, seed, seed_value, -1.0, min_step, start_step);
}

// sup over samples of A of the distance to B.
double directed_hausdorff(const ClippedBody& A, const ClippedBody& B, const std::vector<CVector>& dirs,
                          const Tolerances& tol) {
  const std::size_t n = dirs.size();
  std::vector<CVector> pa(n), pb(n);
  parallel_for(n, [&](std::size_t k) {
    pa[k] = A.boundary(dirs[k]);
    pb[k] = B.boundary(dirs[k]);
  });
  std::vector<CVector> nb(n);
  parallel_for(n, [&](std::size_t k) { nb[k] = B.normal(dirs[k]); });
  // Per sample: upper bound from the nearest sample of B, lower bound from the
  // supporting hyperplanes of B at its samples.
  std::vector<double> upper(n), lower(n);
  std::vector<std::size_t> nearest(n);
  // Flat real copies keep the quadratic pass cheap.
  const std::size_t m = 2 * static_cast<std::size_t>(A.domain.dim());
  std::vector<double> fb(n * m), fn(n * m), bn(n);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::Map<RVector>(&fb[k * m], static_cast<Eigen::Index>(m)) = to_real(pb[k]);
    Eigen::Map<RVector>(&fn[k * m], static_cast<Eigen::Index>(m)) = to_real(nb[k]);
    bn[k] = inner(pb[k], nb[k]).real();
  }
  parallel_for(n, [&](std::size_t j) {
    RVector aj = to_real(pa[j]);
    double best = kInf, lo = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const double* b = &fb[k * m];
      const double* nu = &fn[k * m];
      double sq = 0.0, dot = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double diff = aj[static_cast<Eigen::Index>(i)] - b[i];
        sq += diff * diff;
        dot += aj[static_cast<Eigen::Index>(i)] * nu[i];
      }
      if (sq < best) {
        best = sq;
        arg = k;
      }
      lo = std::max(lo, dot - bn[k]);
    }
    upper[j] = std::sqrt(best);
    lower[j] = std::min(lo, upper[j]);
    nearest[j] = arg;
  });
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return lower[x] > lower[y]; });

  // Refine in decreasing order of the lower bound; a sample whose upper bound
  // cannot beat the running maximum is skipped. Coarse refinement first.
  double best = 0.0;
  std::size_t best_idx = order[0];
  for (std::size_t j : order) {
    if (upper[j] <= best) continue;
    auto coarse = distance_to_body(B, pa[j], to_real(dirs[nearest[j]]), upper[j], 1e-3);
    if (coarse.first <= best) continue;
    double d = distance_to_body(B, pa[j], coarse.second, coarse.first, tol.descent_min_step).first;
    if (d > best) {
      best = d;
      best_idx = j;
    }
  }
  if (best == 0.0) return 0.0;
  // Ascent over the sampling direction of A around the winner. The inner search
  // is warm-started from the previous nearest direction of B.
  RVector inner_w = to_real(dirs[nearest[best_idx]]);
  auto g = [&](const RVector& w) {
    CVector a = A.boundary(from_real(w));
    if (B.contains_closed(a)) return 0.0;
    double seed_value = (a - B.boundary(from_real(inner_w))).norm();
    auto [d, wb] = distance_to_body(B, a, inner_w, seed_value, 1e-7, 0.02);
    inner_w = wb;
    return d;
  };
  return std::max(best, sphere_search(g, to_real(dirs[best_idx]), best, 1.0, 1e-7).first);
}

}  // namespace

double local_hausdorff(const ConvexDomain& a, const ConvexDomain& b, double R, std::size_t n_samples,
                       const Tolerances& tol) {
  if (a.dim() != b.dim()) fail(ErrorCode::InvalidSpec, "domains have different dimensions");
  if (!(R > 0.0)) fail(ErrorCode::InvalidSpec, "radius must be positive");
  auto ca = interior_point_in_ball(a, R);
  auto cb = interior_point_in_ball(b, R);
  if (!ca || !cb) fail(ErrorCode::EmptyClip, "a domain misses the ball of radius R");
  ClippedBody A{a, R, *ca, tol}, B{b, R, *cb, tol};
  auto dirs = sphere_directions(a.dim(), n_samples);
  return std::max(directed_hausdorff(A, B, dirs, tol), directed_hausdorff(B, A, dirs, tol));
}

std::vector<BlowupStep> blowup_sequence(const DomainPtr& domain, const CVector& xi, int n_steps, const CVector& v,
                                        const Tolerances& tol) {
  const int d = domain->dim();
  if (d < 2) fail(ErrorCode::InvalidSpec, "blow-up needs d >= 2");
  if (xi.size() != d || v.size() != d) fail(ErrorCode::InvalidSpec, "point or direction has wrong dimension");
  if (n_steps < 1) fail(ErrorCode::GridError, "need at least one step");
  SupportingFunctional P = supporting_functional(*domain, xi, tol);
  if (P.non_smooth) fail(ErrorCode::NormalUndefined, "boundary point is not smooth");
  const CVector n = -P.outward_normal;
  if (v.norm() == 0.0) fail(ErrorCode::ZeroDirection, "direction is zero");
  if (std::abs(inner(v, n)) > tol.tangential_tol * v.norm())
    fail(ErrorCode::NotTangential, "direction is not complex tangential");

  // T(z) = L(z - xi) with L n = i e_1, L v = e_2, L unitary up to the factor i.
  CMatrix frame(d, 2);
  frame.col(0) = n;
  frame.col(1) = v / v.norm();
  CMatrix rest = orthonormal_complement(frame, d);
  CMatrix L(d, d);
  L.row(0) = cd(0.0, 1.0) * n.adjoint();
  L.row(1) = (v / v.norm()).adjoint();
  for (int k = 2; k < d; ++k) L.row(k) = rest.col(k - 2).adjoint();
  const AffineMap T(L, xi, zeros(d));
  const DomainPtr TO = make_affine_image(T, domain);

  // S(z) = (i z_1 + 1, z_2, ...): the base point i e_1 goes to 0 and the
  // boundary point 0 goes to e_1.
  CMatrix Smat = CMatrix::Identity(d, d);
  Smat(0, 0) = cd(0.0, 1.0);
  const AffineMap S(Smat, unit(d, 0));

  std::vector<BlowupStep> steps;
  for (int k = 1; k <= n_steps; ++k) {
    BlowupStep st;
    st.n = k;
    st.r = std::pow(4.0, -k);
    CVector base = zeros(d);
    base(0) = cd(0.0, st.r);
    auto dd = delta_dir_detail(*TO, base, unit(d, 1), tol);
    if (!dd) fail(ErrorCode::UnboundedDomain, "tangential slice is unbounded");
    cd zn = std::polar(dd->value, dd->theta);
    CMatrix An = CMatrix::Identity(d, d);
    An(0, 0) = 1.0 / st.r;
    An(1, 1) = 1.0 / zn;
    AffineMap pre = S.compose(AffineMap::linear(An)).compose(T);
    auto Cn = make_affine_image(pre, domain);
    SliceExtension B = slice_extend_normalization(*Cn, tol);
    st.map = B.map.compose(pre);
    st.domain = make_affine_image(st.map, domain);
    st.kd = kd_membership(*st.domain, tol);
    if (steps.empty()) {
      st.dH.fill(std::numeric_limits<double>::quiet_NaN());
    } else {
      for (std::size_t j = 0; j < kBlowupRadii.size(); ++j)
        st.dH[j] = local_hausdorff(*steps.back().domain, *st.domain, kBlowupRadii[j], tol.hausdorff_samples, tol);
    }
    steps.push_back(std::move(st));
  }
  return steps;
}

}  // namespace kobayashi
