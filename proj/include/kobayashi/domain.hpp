#pragma once

#include "kobayashi/linalg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kobayashi {

class ConvexDomain;

struct Ball {
  double radius = 1.0;
  CVector center;
};

// {Im z_i > 0 for every i}
struct HalfPlaneProduct {};

// {Im z_1 > sum_{i>=2} |z_i|^2}
struct Siegel {};

// {Im z_1 > sum_{i>=2} |z_i|^{2 m_i}}, exponents holds m_2 .. m_d.
struct PowerEpigraph {
  std::vector<int> exponents;
};

// Open real half-space {Re <z, normal> < offset}.
struct HalfSpace {
  CVector normal;
  double offset = 0.0;
};

struct Polytope {
  std::vector<HalfSpace> faces;
};

// {defining(z) < 0} for a user-supplied convex function. Whether the set
// contains a complex affine line cannot be checked and must be declared.
struct ConvexSublevel {
  std::function<double(const CVector&)> defining;
  bool declared_line_free = false;
  std::string label = "sublevel";
};

struct AffineImage {
  AffineMap map;
  std::shared_ptr<const ConvexDomain> source;
};

using DomainVariant =
    std::variant<Ball, HalfPlaneProduct, Siegel, PowerEpigraph, Polytope, ConvexSublevel, AffineImage>;

// A convex domain in C^d described declaratively. The margin is a concave
// function that is positive exactly on the domain; for model families it is
// the natural defining function, not a Euclidean distance.
class ConvexDomain {
 public:
  ConvexDomain(int dim, DomainVariant variant, double clip_radius = 1e6);

  int dim() const { return dim_; }
  double clip_radius() const { return clip_radius_; }
  const DomainVariant& variant() const { return variant_; }

  double margin(const CVector& z) const;
  bool contains(const CVector& z) const { return margin(z) > 0.0; }

  // Complex gradient g of the margin: margin(z + h) ~ margin(z) + Re <h, g>.
  // Points inward at boundary points of smooth variants.
  CVector margin_gradient(const CVector& z) const;

  // Exact Euclidean distance to the boundary when the variant admits one.
  std::optional<double> closed_form_delta(const CVector& z) const;

  // Number of supporting pieces active at z (>1 means a corner or edge).
  int active_pieces(const CVector& z, double tol) const;

  bool is_model_ball() const;
  std::string describe() const;

 private:
  int dim_;
  DomainVariant variant_;
  double clip_radius_;
};

using DomainPtr = std::shared_ptr<const ConvexDomain>;

DomainPtr make_ball(int dim, double radius = 1.0);
DomainPtr make_ball(const CVector& center, double radius);
DomainPtr make_half_plane_product(int dim);
DomainPtr make_siegel(int dim);
DomainPtr make_power_epigraph(std::vector<int> exponents);
DomainPtr make_polytope(int dim, std::vector<HalfSpace> faces, double clip_radius = 1e6);
DomainPtr make_unit_cube(int dim);
DomainPtr make_polydisk(int dim);
// {sum |z_i|^2 / a_i^2 < 1}
DomainPtr make_ellipsoid(const std::vector<double>& semi_axes);
// {Im z_1 > f(z)} for convex f.
DomainPtr make_epigraph(int dim, std::function<double(const CVector&)> f, std::string label = "epigraph",
                        double clip_radius = 1e6);
DomainPtr make_sublevel(int dim, std::function<double(const CVector&)> defining, bool line_free,
                        std::string label = "sublevel", double clip_radius = 1e6);
DomainPtr make_affine_image(const AffineMap& map, DomainPtr source);
DomainPtr with_clip_radius(const DomainPtr& domain, double clip_radius);

}  // namespace kobayashi
