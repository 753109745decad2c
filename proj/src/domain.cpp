#include "kobayashi/domain.hpp"

#include "kobayashi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kobayashi {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double ipow(double x, int m) {
  double r = 1.0;
  for (int k = 0; k < m; ++k) r *= x;
  return r;
}

// sum_{i>=2} |z_i|^{2 m_i}
double power_sum(const CVector& z, const std::vector<int>& m) {
  double s = 0.0;
  for (Eigen::Index i = 1; i < z.size(); ++i) s += ipow(std::norm(z(i)), m[i - 1]);
  return s;
}

// Distance from (x + iy, z') to the paraboloid Im w_1 = |w'|^2. The closest
// point shares Re w_1 and the direction of z', which reduces the problem to
// min_R (R^2 - y)^2 + (R - rho)^2.
double siegel_delta(double y, double rho) {
  auto F = [&](double R) { return (R * R - y) * (R * R - y) + (R - rho) * (R - rho); };
  auto dF = [&](double R) { return 2.0 * R * R * R + (1.0 - 2.0 * y) * R - rho; };
  double best = F(0.0);
  double hi = std::max({1.0, rho, std::sqrt(std::abs(y)) + 1.0});
  while (dF(hi) < 0.0) hi *= 2.0;
  double lo = 0.0;
  if (rho == 0.0) {
    // dF(0) = 0; the other critical point sits at R^2 = y - 1/2.
    if (y > 0.5) {
      double R = std::sqrt(y - 0.5);
      best = std::min(best, F(R));
    }
    return std::sqrt(best);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (dF(mid) < 0.0 ? lo : hi) = mid;
  }
  best = std::min(best, F(0.5 * (lo + hi)));
  return std::sqrt(best);
}

bool polytope_line_free(int dim, const Polytope& p) {
  if (p.faces.empty()) return false;
  Eigen::MatrixXcd normals(dim, static_cast<Eigen::Index>(p.faces.size()));
  for (std::size_t k = 0; k < p.faces.size(); ++k) normals.col(k) = p.faces[k].normal;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(normals);
  qr.setThreshold(1e-12);
  return qr.rank() == dim;
}

}  // namespace

ConvexDomain::ConvexDomain(int dim, DomainVariant variant, double clip_radius)
    : dim_(dim), variant_(std::move(variant)), clip_radius_(clip_radius) {
  check_dim(dim);
  if (!(clip_radius > 0.0)) fail(ErrorCode::InvalidSpec, "clip_radius must be positive");
  std::visit(overloaded{
                 [&](const Ball& b) {
                   if (!(b.radius > 0.0)) fail(ErrorCode::InvalidSpec, "ball radius must be positive");
                   if (b.center.size() != dim) fail(ErrorCode::InvalidSpec, "ball center has wrong dimension");
                 },
                 [&](const HalfPlaneProduct&) {},
                 [&](const Siegel&) {},
                 [&](const PowerEpigraph& p) {
                   if (static_cast<int>(p.exponents.size()) != dim - 1)
                     fail(ErrorCode::InvalidSpec, "power epigraph needs d-1 exponents");
                   for (int m : p.exponents)
                     if (m < 1) fail(ErrorCode::InvalidSpec, "power epigraph exponents must be >= 1");
                 },
                 [&](const Polytope& p) {
                   for (const auto& f : p.faces) {
                     if (f.normal.size() != dim) fail(ErrorCode::InvalidSpec, "half-space normal has wrong dimension");
                     if (f.normal.norm() == 0.0) fail(ErrorCode::InvalidSpec, "half-space normal is zero");
                   }
                   if (!polytope_line_free(dim, p))
                     fail(ErrorCode::InvalidSpec, "polytope contains a complex affine line");
                 },
                 [&](const ConvexSublevel& s) {
                   if (!s.defining) fail(ErrorCode::InvalidSpec, "sublevel domain needs a defining function");
                   if (!s.declared_line_free)
                     fail(ErrorCode::InvalidSpec, "sublevel domain must be declared free of complex lines");
                 },
                 [&](const AffineImage& a) {
                   if (!a.source || a.source->dim() != dim || a.map.dim() != dim)
                     fail(ErrorCode::InvalidSpec, "affine image has inconsistent dimensions");
                 },
             },
             variant_);
}

double ConvexDomain::margin(const CVector& z) const {
  return std::visit(
      overloaded{
          [&](const Ball& b) { return b.radius - (z - b.center).norm(); },
          [&](const HalfPlaneProduct&) {
            double m = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < z.size(); ++i) m = std::min(m, z(i).imag());
            return m;
          },
          [&](const Siegel&) {
            double s = 0.0;
            for (Eigen::Index i = 1; i < z.size(); ++i) s += std::norm(z(i));
            return z(0).imag() - s;
          },
          [&](const PowerEpigraph& p) { return z(0).imag() - power_sum(z, p.exponents); },
          [&](const Polytope& p) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& f : p.faces) m = std::min(m, (f.offset - inner(z, f.normal).real()) / f.normal.norm());
            return m;
          },
          [&](const ConvexSublevel& s) { return -s.defining(z); },
          [&](const AffineImage& a) { return a.source->margin(a.map.apply_inverse(z)); },
      },
      variant_);
}

CVector ConvexDomain::margin_gradient(const CVector& z) const {
  return std::visit(
      overloaded{
          [&](const Ball& b) -> CVector {
            CVector r = z - b.center;
            double n = r.norm();
            if (n == 0.0) return CVector::Zero(dim_);
            return -r / n;
          },
          [&](const HalfPlaneProduct&) -> CVector {
            Eigen::Index arg = 0;
            for (Eigen::Index i = 1; i < z.size(); ++i)
              if (z(i).imag() < z(arg).imag()) arg = i;
            CVector g = CVector::Zero(dim_);
            g(arg) = cd(0.0, 1.0);
            return g;
          },
          [&](const Siegel&) -> CVector {
            CVector g = -2.0 * z;
            g(0) = cd(0.0, 1.0);
            return g;
          },
          [&](const PowerEpigraph& p) -> CVector {
            CVector g(dim_);
            g(0) = cd(0.0, 1.0);
            for (Eigen::Index i = 1; i < z.size(); ++i) {
              int m = p.exponents[i - 1];
              g(i) = -2.0 * m * ipow(std::norm(z(i)), m - 1) * z(i);
            }
            return g;
          },
          [&](const Polytope& p) -> CVector {
            std::size_t arg = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < p.faces.size(); ++k) {
              const auto& f = p.faces[k];
              double m = (f.offset - inner(z, f.normal).real()) / f.normal.norm();
              if (m < best) {
                best = m;
                arg = k;
              }
            }
            return -p.faces[arg].normal / p.faces[arg].normal.norm();
          },
          [&](const ConvexSublevel& s) -> CVector {
            double h = 1e-6 * (1.0 + z.norm());
            CVector g(dim_);
            for (int i = 0; i < dim_; ++i) {
              CVector zp = z, zm = z;
              zp(i) += h;
              zm(i) -= h;
              double gx = -(s.defining(zp) - s.defining(zm)) / (2 * h);
              zp = z;
              zm = z;
              zp(i) += cd(0.0, h);
              zm(i) -= cd(0.0, h);
              double gy = -(s.defining(zp) - s.defining(zm)) / (2 * h);
              g(i) = cd(gx, gy);
            }
            return g;
          },
          [&](const AffineImage& a) -> CVector {
            CVector g0 = a.source->margin_gradient(a.map.apply_inverse(z));
            return a.map.linear_inverse().adjoint() * g0;
          },
      },
      variant_);
}

std::optional<double> ConvexDomain::closed_form_delta(const CVector& z) const {
  return std::visit(
      overloaded{
          [&](const Ball& b) -> std::optional<double> { return b.radius - (z - b.center).norm(); },
          [&](const HalfPlaneProduct&) -> std::optional<double> { return margin(z); },
          [&](const Siegel&) -> std::optional<double> {
            return siegel_delta(z(0).imag(), z.tail(dim_ - 1).norm());
          },
          [&](const PowerEpigraph& p) -> std::optional<double> {
            if (std::all_of(p.exponents.begin(), p.exponents.end(), [](int m) { return m == 1; }))
              return siegel_delta(z(0).imag(), z.tail(dim_ - 1).norm());
            return std::nullopt;
          },
          [&](const Polytope&) -> std::optional<double> { return margin(z); },
          [&](const ConvexSublevel&) -> std::optional<double> { return std::nullopt; },
          [&](const AffineImage& a) -> std::optional<double> {
            const CMatrix& L = a.map.linear_part();
            if ((L.adjoint() * L - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-12) return std::nullopt;
            return a.source->closed_form_delta(a.map.apply_inverse(z));
          },
      },
      variant_);
}

int ConvexDomain::active_pieces(const CVector& z, double tol) const {
  return std::visit(overloaded{
                        [&](const Polytope& p) {
                          int n = 0;
                          for (const auto& f : p.faces)
                            if (std::abs((f.offset - inner(z, f.normal).real()) / f.normal.norm()) <= tol) ++n;
                          return n;
                        },
                        [&](const HalfPlaneProduct&) {
                          int n = 0;
                          for (Eigen::Index i = 0; i < z.size(); ++i)
                            if (std::abs(z(i).imag()) <= tol) ++n;
                          return n;
                        },
                        [&](const AffineImage& a) { return a.source->active_pieces(a.map.apply_inverse(z), tol); },
                        [&](const auto&) { return 1; },
                    },
                    variant_);
}

bool ConvexDomain::is_model_ball() const { return std::holds_alternative<Ball>(variant_); }

std::string ConvexDomain::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Ball& b) { os << "Ball(r=" << b.radius << ")"; },
                 [&](const HalfPlaneProduct&) { os << "HalfPlaneProduct"; },
                 [&](const Siegel&) { os << "Siegel"; },
                 [&](const PowerEpigraph& p) {
                   os << "PowerEpigraph(";
                   for (std::size_t i = 0; i < p.exponents.size(); ++i) os << (i ? "," : "") << p.exponents[i];
                   os << ")";
                 },
                 [&](const Polytope& p) { os << "Polytope(" << p.faces.size() << " faces)"; },
                 [&](const ConvexSublevel& s) { os << s.label; },
                 [&](const AffineImage& a) { os << "AffineImage(" << a.source->describe() << ")"; },
             },
             variant_);
  os << " in C^" << dim_;
  return os.str();
}

DomainPtr make_ball(int dim, double radius) { return make_ball(zeros(dim), radius); }

DomainPtr make_ball(const CVector& center, double radius) {
  return std::make_shared<ConvexDomain>(static_cast<int>(center.size()), Ball{radius, center});
}

DomainPtr make_half_plane_product(int dim) { return std::make_shared<ConvexDomain>(dim, HalfPlaneProduct{}); }

DomainPtr make_siegel(int dim) { return std::make_shared<ConvexDomain>(dim, Siegel{}); }

DomainPtr make_power_epigraph(std::vector<int> exponents) {
  int dim = static_cast<int>(exponents.size()) + 1;
  return std::make_shared<ConvexDomain>(dim, PowerEpigraph{std::move(exponents)});
}

DomainPtr make_polytope(int dim, std::vector<HalfSpace> faces, double clip_radius) {
  return std::make_shared<ConvexDomain>(dim, Polytope{std::move(faces)}, clip_radius);
}

DomainPtr make_unit_cube(int dim) {
  std::vector<HalfSpace> faces;
  for (int i = 0; i < dim; ++i) {
    for (cd dir : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1)}) {
      CVector n = zeros(dim);
      n(i) = dir;
      faces.push_back({n, 1.0});
    }
  }
  return make_polytope(dim, std::move(faces));
}

DomainPtr make_polydisk(int dim) {
  return make_sublevel(
      dim,
      [](const CVector& z) { return z.cwiseAbs().maxCoeff() - 1.0; }, true, "Polydisk");
}

DomainPtr make_ellipsoid(const std::vector<double>& semi_axes) {
  int dim = static_cast<int>(semi_axes.size());
  CMatrix L = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) L(i, i) = semi_axes[i];
  return make_affine_image(AffineMap::linear(L), make_ball(dim, 1.0));
}

DomainPtr make_epigraph(int dim, std::function<double(const CVector&)> f, std::string label, double clip_radius) {
  auto defining = [f = std::move(f)](const CVector& z) { return f(z) - z(0).imag(); };
  return make_sublevel(dim, std::move(defining), true, std::move(label), clip_radius);
}

DomainPtr make_sublevel(int dim, std::function<double(const CVector&)> defining, bool line_free, std::string label,
                        double clip_radius) {
  return std::make_shared<ConvexDomain>(dim, ConvexSublevel{std::move(defining), line_free, std::move(label)},
                                        clip_radius);
}

DomainPtr make_affine_image(const AffineMap& map, DomainPtr source) {
  double clip = source->clip_radius();
  int dim = source->dim();
  return std::make_shared<ConvexDomain>(dim, AffineImage{map, std::move(source)}, clip);
}

DomainPtr with_clip_radius(const DomainPtr& domain, double clip_radius) {
  return std::make_shared<ConvexDomain>(domain->dim(), domain->variant(), clip_radius);
}

}  // namespace kobayashi
