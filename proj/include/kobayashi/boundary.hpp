#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"

#include <optional>

namespace kobayashi {

struct BoundaryHit {
  double parameter = 0.0;
  CVector point;
  double residual = 0.0;
};

// First crossing of z + t u (t > 0) with the boundary; nullopt means the ray
// left the clip ball without crossing.
std::optional<BoundaryHit> ray_boundary_hit(const ConvexDomain& domain, const CVector& z, const CVector& u,
                                            const Tolerances& tol = default_tolerances());

struct ClosestPoint {
  double distance = 0.0;
  CVector point;
  // True when a second, well separated minimiser came within closest_tie_tol.
  bool ambiguous = false;
};

// delta(z): closed form for model families, sampled search otherwise.
double delta(const ConvexDomain& domain, const CVector& z, const Tolerances& tol = default_tolerances());

// Sampled search over real directions with local refinement. Always
// numeric, also for model families.
ClosestPoint delta_sampled(const ConvexDomain& domain, const CVector& z,
                           const Tolerances& tol = default_tolerances());

// Closest boundary point inside z + span(basis), basis orthonormal.
ClosestPoint closest_in_subspace(const ConvexDomain& domain, const CVector& z, const CMatrix& basis,
                                 const Tolerances& tol = default_tolerances());

struct DirectionalDelta {
  double value = 0.0;
  double theta = 0.0;  // boundary reached along e^{i theta} v
  CVector point;
};

// delta(z; v) with the minimising phase. nullopt when every sampled ray
// escapes the clip ball.
std::optional<DirectionalDelta> delta_dir_detail(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                                 const Tolerances& tol = default_tolerances());

std::optional<double> delta_dir(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                const Tolerances& tol = default_tolerances());

// Complex affine functional P(z) = -i <z - xi, n> with n the outward unit
// normal of a supporting hyperplane at xi. P(xi) = 0 and Im P > 0 on the
// domain.
struct SupportingFunctional {
  CVector xi;
  CVector outward_normal;
  bool non_smooth = false;  // polytope edge or vertex: one face was picked

  cd operator()(const CVector& z) const { return cd(0.0, -1.0) * inner(z - xi, outward_normal); }
};

SupportingFunctional supporting_functional(const ConvexDomain& domain, const CVector& xi,
                                           const Tolerances& tol = default_tolerances());

// Inward unit normal at a boundary point (from the margin gradient).
CVector inward_normal(const ConvexDomain& domain, const CVector& xi);

// Some interior point of domain ∩ B_R(0), or nullopt.
std::optional<CVector> interior_point_in_ball(const ConvexDomain& domain, double R);

}  // namespace kobayashi
