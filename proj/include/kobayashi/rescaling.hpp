#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"

#include <array>
#include <vector>

namespace kobayashi {

struct KdTest {
  bool pass = false;
  double margin = 0.0;  // >= 0 means the condition holds
};

// Membership in the normal family K_d: the unit disks D e_i lie in the
// domain and the planes Z_i = e_i + span{e_{i+1}..e_d} miss it.
struct KdReport {
  std::vector<KdTest> disk_inclusions;
  std::vector<KdTest> plane_exclusions;
  bool passes = false;
};

KdReport kd_membership(const ConvexDomain& domain, const Tolerances& tol = default_tolerances());

// Largest margin of the domain on e_i + span{e_{i+1}..e_d} (restricted to
// the first `upto` coordinates when upto < dim).
double plane_sup_margin(const ConvexDomain& domain, int i, int upto, const Tolerances& tol);

struct Normalization {
  AffineMap map;
  KdReport report;
  std::vector<CVector> xis;     // chosen boundary points
  std::vector<double> deltas;   // delta(x; xi_i - x), the inverse diagonal of Lambda
};

// A = Lambda U T with T(z) = z - x.
Normalization frankel_normalize(const ConvexDomain& domain, const CVector& x,
                                const Tolerances& tol = default_tolerances());

struct SliceExtension {
  AffineMap map;
  KdReport report;
  std::vector<CVector> xis;
  double identity_defect = 0.0;  // max |A e_i - e_i| for i = 1, 2
};

// Linear A fixing span{e_1, e_2} with A(domain) in K_d.
SliceExtension slice_extend_normalization(const ConvexDomain& domain, const Tolerances& tol = default_tolerances());

// d_H of the closures of A ∩ B_R(0) and B ∩ B_R(0).
double local_hausdorff(const ConvexDomain& a, const ConvexDomain& b, double R, std::size_t n_samples,
                       const Tolerances& tol = default_tolerances());

inline constexpr std::array<double, 3> kBlowupRadii{1.0, 4.0, 16.0};

struct BlowupStep {
  int n = 0;
  double r = 0.0;
  AffineMap map;
  DomainPtr domain;
  KdReport kd;
  // Distance to the previous step's domain for each radius in kBlowupRadii;
  // NaN on the first step.
  std::array<double, 3> dH{};
};

std::vector<BlowupStep> blowup_sequence(const DomainPtr& domain, const CVector& xi, int n_steps, const CVector& v,
                                        const Tolerances& tol = default_tolerances());

}  // namespace kobayashi
