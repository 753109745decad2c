#pragma once

#include <cstddef>

namespace kobayashi {

// Every numeric knob of the toolkit lives here so that a run can be
// reproduced from one record. Defaults are the calibrated values; the CLI
// may override any field from a config document.
struct Tolerances {
  // ray shooting
  double initial_step = 1.0;
  int max_bisection_steps = 200;
  double bisection_rel_width = 1e-15;
  double clip_radius = 1e6;

  // boundary distance searches
  int theta_grid = 256;
  double golden_width = 1e-10;
  std::size_t delta_directions = 512;
  double descent_min_step = 1e-8;
  double model_agreement = 1e-6;

  // oracle sanity
  double boundary_tol = 1e-8;
  double singular_rel = 1e-12;
  double tangential_tol = 1e-10;

  // distance bounds
  std::size_t chain_max_links = 1u << 16;
  std::size_t chain_tangent_links = 16;
  double chain_improvement = 1e-6;
  double disk_shrink = 1e-10;
  double circumscribed_inflate = 1e-9;
  std::size_t lower_bound_samples = 32;

  // rescaling
  double kd_margin_tol = 1e-6;
  int kd_disk_samples = 64;
  double plane_search_tol = 1e-8;
  std::size_t hausdorff_samples = 4096;
  bool strict_unique_closest = false;
  double closest_tie_tol = 1e-9;

  // detectors
  double spc_band_sigmas = 3.0;
  double spc_max_half_width = 0.05;
  double spc_exponent_floor = 0.02;
  std::size_t squeezing_directions = 4096;
  double bergman_metric_step = 1e-4;
  double bergman_curvature_step = 2e-2;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace kobayashi
