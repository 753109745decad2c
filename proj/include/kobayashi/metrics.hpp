#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"

#include <string>

namespace kobayashi {

// All distances use the normalisation K_H(z, w) = ½ arcosh(1 + |z-w|²/(2 Im z Im w)),
// so the unit disk has K(0, r) = artanh r.

double dist_disk(cd z, cd w);
double dist_halfplane(cd z, cd w);
double dist_ball(const CVector& z, const CVector& w);
double dist_ball(int dim, const CVector& z, const CVector& w);
double dist_siegel(const CVector& z, const CVector& w);
double dist_siegel(int dim, const CVector& z, const CVector& w);

// Biholomorphism P_d -> B_d, z_1 = (w_1 - i)/(w_1 + i), z_j = 2 w_j/(w_1 + i).
CVector cayley_to_ball(const CVector& w);
CVector cayley_from_ball(const CVector& z);

struct DistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_witness;
  std::string upper_witness;
  bool separated = true;  // false when no candidate hyperplane separated the points
};

struct BoundValue {
  double value = 0.0;
  std::string witness;
  bool separated = true;
};

BoundValue lower_bound_hyperplane(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                                  const Tolerances& tol = default_tolerances());

// +inf when no chain of inscribed disks connects the points.
BoundValue upper_bound_chain(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                             const Tolerances& tol = default_tolerances());

DistanceBounds dist_bounds(const ConvexDomain& domain, const CVector& z1, const CVector& z2,
                           const Tolerances& tol = default_tolerances());

// Bounds on the infinitesimal metric k(z; v).
DistanceBounds infinitesimal_estimate(const ConvexDomain& domain, const CVector& z, const CVector& v,
                                      const Tolerances& tol = default_tolerances());

}  // namespace kobayashi
