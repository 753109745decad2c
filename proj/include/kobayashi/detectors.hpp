#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"
#include "kobayashi/fit.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kobayashi {

enum class Verdict { ConsistentWithSPC, Inconsistent, Inconclusive };

std::string verdict_name(Verdict v);

struct SpcVerdict {
  ExponentFit fit;
  double target = 0.5;
  Verdict verdict = Verdict::Inconclusive;
};

Verdict classify_exponent(const ExponentFit& fit, double target, const Tolerances& tol = default_tolerances());

// Default radii: 24 geometric points on [1e-6, 1e-2].
std::vector<double> default_spc_grid();

// Slope of log delta(xi + r n; v) against log r.
SpcVerdict spc_exponent(const ConvexDomain& domain, const CVector& xi, const CVector& v,
                        const std::vector<double>& r_grid = default_spc_grid(),
                        const Tolerances& tol = default_tolerances());

struct ScanRow {
  std::size_t xi_index = 0;
  std::size_t dir_index = 0;
  double exponent = 0.0;
  double half_width = 0.0;
};

struct ScanOptions {
  std::optional<CVector> center;      // interior point the boundary is sampled from
  std::vector<CVector> extra_points;  // boundary points scanned before the samples
  std::vector<double> r_grid = default_spc_grid();
};

struct ScanResult {
  SpcVerdict worst;  // smallest measured exponent
  CVector witness_xi;
  CVector witness_v;
  std::vector<ScanRow> rows;
  std::size_t skipped = 0;  // boundary points where the normal was undefined
};

ScanResult spc_global_scan(const ConvexDomain& domain, std::size_t n_boundary_samples, const ScanOptions& options = {},
                           const Tolerances& tol = default_tolerances());

// r/R from the inscribed and circumscribed radii about p; the map z -> (z - p)/R
// certifies s(p) >= r/R.
double squeezing_lower_bound(const ConvexDomain& domain, const CVector& p,
                             const Tolerances& tol = default_tolerances());

// Holomorphic sectional curvature of the Bergman metric of B_d at (z, v).
double ball_bergman_curvature(int dim, const CVector& z, const CVector& v,
                              const Tolerances& tol = default_tolerances());

}  // namespace kobayashi
