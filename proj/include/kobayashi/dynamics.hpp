#pragma once

#include "kobayashi/config.hpp"
#include "kobayashi/domain.hpp"
#include "kobayashi/fit.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kobayashi {

enum class Model { Siegel, Ball };

// Unit-speed geodesic ray in a model domain.
class GeodesicRay {
 public:
  // t -> v + (alpha + i(e^{2t} + |v|^2)) e_1, with v in span{e_2..e_d}.
  static GeodesicRay siegel_vertical(const CVector& v, double alpha = 0.0);
  // t -> tanh(t) u in the unit ball, |u| = 1.
  static GeodesicRay ball_radial(const CVector& u);
  static GeodesicRay custom(int dim, Model model, std::function<CVector(double)> curve);

  int dim() const { return dim_; }
  Model model() const { return model_; }
  CVector operator()(double t) const;

  // Tail v of a SiegelVertical ray; used to detect rays on a common slice.
  const std::optional<CVector>& slice_tail() const { return tail_; }

 private:
  int dim_ = 1;
  Model model_ = Model::Siegel;
  std::function<CVector(double)> curve_;
  std::optional<CVector> tail_;
};

double model_distance(Model model, const CVector& z, const CVector& w);

struct SliceProfile {
  double alpha_v = 0.0;  // +inf when the slice never enters the domain
};

// Boundary height of the slice C e_1 + v.
SliceProfile slice_alpha(const ConvexDomain& domain, const CVector& v, const Tolerances& tol = default_tolerances());

// s = t + ½ log(1 - alpha e^{-2t}).
double time_shift(double t, double alpha_v);

struct CurveSample {
  double t = 0.0;
  double distance = 0.0;
  std::string path;  // "halfplane" (common slice) or "invariant"
};

std::vector<CurveSample> pair_distance_curve(const GeodesicRay& ray1, const GeodesicRay& ray2,
                                             const std::vector<double>& t_grid, double shift = 0.0);

ExponentFit lyapunov_exponent(const GeodesicRay& ray1, const GeodesicRay& ray2, double t_min, double t_max,
                              std::size_t n, double shift = 0.0);

// Shift T in [lo, hi] minimising K(ray1(t), ray2(t + T)) at t = t_eval.
double optimal_shift(const GeodesicRay& ray1, const GeodesicRay& ray2, double t_eval, double lo = -1.0,
                     double hi = 1.0);

// Slope of log delta(i e^r e_1; v) against r on [r_min, r_max].
ExponentFit boundary_growth_exponent(const ConvexDomain& domain, const CVector& v, double r_min = 2.0,
                                     double r_max = 10.0, std::size_t n = 32,
                                     const Tolerances& tol = default_tolerances());

}  // namespace kobayashi
