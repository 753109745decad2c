#include <doctest.h>

#include "kobayashi/boundary.hpp"
#include "kobayashi/detectors.hpp"
#include "kobayashi/errors.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace kobayashi;

namespace {

// delta(z; v) for the ellipsoid sum |w_i|^2/a_i^2 < 1: along w = z + t e^{i phi} v
// the constraint is a quadratic in t; the positive root, minimised over phi.
double ellipsoid_line_oracle(const std::vector<double>& axes, const CVector& z, const CVector& v) {
  double best = 1e300;
  for (int k = 0; k < 20000; ++k) {
    cd e = std::polar(1.0, 2.0 * std::numbers::pi * k / 20000.0);
    double A = 0.0, B = 0.0, C = -1.0;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      double w = 1.0 / (axes[i] * axes[i]);
      cd u = e * v(static_cast<Eigen::Index>(i)), p = z(static_cast<Eigen::Index>(i));
      A += w * std::norm(u);
      B += 2.0 * w * (std::conj(p) * u).real();
      C += w * std::norm(p);
    }
    double t = (-B + std::sqrt(B * B - 4.0 * A * C)) / (2.0 * A);
    best = std::min(best, t * v.norm());
  }
  return best;
}

}  // namespace

TEST_CASE("complex-line distance on ellipsoids matches the quadratic oracle") {
  std::mt19937_64 rng(71);
  std::vector<double> axes{1.0, 2.0};
  auto ellipsoid = make_ellipsoid(axes);
  for (int k = 0; k < 5; ++k) {
    CVector z = testing::ball_point(rng, 2, 0.8);
    CVector v = testing::gaussian_vector(rng, 2);
    CHECK(*delta_dir(*ellipsoid, z, v) == doctest::Approx(ellipsoid_line_oracle(axes, z, v)).epsilon(1e-6));
  }
}

TEST_CASE("tangential exponent on the ball") {
  auto ball = make_ball(2);
  for (double r : {1e-5, 1e-3}) {
    CVector z = (1.0 - r) * unit(2, 0);
    CHECK(*delta_dir(*ball, z, unit(2, 1)) == doctest::Approx(std::sqrt(2.0 * r - r * r)).epsilon(1e-9));
  }
  auto s = spc_exponent(*ball, unit(2, 0), unit(2, 1));
  CHECK(std::abs(s.fit.exponent - 0.5) <= 0.02);
  CHECK(s.verdict == Verdict::ConsistentWithSPC);
}

TEST_CASE("tangential exponent on the quartic epigraph") {
  auto quartic = make_power_epigraph({2});
  CVector z = zeros(2);
  z(0) = cd(0.0, 1e-4);
  CHECK(*delta_dir(*quartic, z, unit(2, 1)) == doctest::Approx(0.1).epsilon(1e-8));
  auto s = spc_exponent(*quartic, zeros(2), unit(2, 1));
  CHECK(std::abs(s.fit.exponent - 0.25) <= 0.02);
  CHECK(s.verdict == Verdict::Inconsistent);
}

TEST_CASE("exponent family 1/(2m)") {
  for (int m = 1; m <= 3; ++m) {
    auto s = spc_exponent(*make_power_epigraph({m}), zeros(2), unit(2, 1));
    CHECK(std::abs(s.fit.exponent - 1.0 / (2.0 * m)) <= 0.02);
  }
}

TEST_CASE("normal directions are rejected") {
  auto ball = make_ball(2);
  try {
    spc_exponent(*ball, unit(2, 0), unit(2, 0));
    FAIL("expected NotTangential");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTangential);
  }
}

TEST_CASE("exponent is unitarily invariant") {
  std::mt19937_64 rng(73);
  auto base = make_ellipsoid({1.0, 2.0});
  double ref = spc_exponent(*base, unit(2, 0), unit(2, 1)).fit.exponent;
  CMatrix U = testing::random_unitary(rng, 2);
  auto image = make_affine_image(AffineMap::linear(U), base);
  double rotated = spc_exponent(*image, U * unit(2, 0), U * unit(2, 1)).fit.exponent;
  CHECK(std::abs(rotated - ref) <= 1e-6);
}

TEST_CASE("global scans") {
  auto ball = spc_global_scan(*make_ball(2), 16);
  CHECK(ball.rows.size() >= 16);
  for (const auto& row : ball.rows) CHECK(std::abs(row.exponent - 0.5) <= 0.02);

  auto ellipsoid = spc_global_scan(*make_ellipsoid({1.0, 2.0}), 16);
  for (const auto& row : ellipsoid.rows) CHECK(std::abs(row.exponent - 0.5) <= 0.02);
  CHECK(ellipsoid.worst.verdict == Verdict::ConsistentWithSPC);
}

TEST_CASE("scan finds the flat point of a clipped quartic piece") {
  // {Im z_1 > |z_2|^4} cut down by the ball |z - 0.9i e_1| < 1, which is
  // strongly pseudoconvex where it bounds the piece.
  auto piece = make_sublevel(
      2,
      [](const CVector& z) {
        CVector c = z;
        c(0) -= cd(0.0, 0.9);
        return std::max(std::pow(std::norm(z(1)), 2) - z(0).imag(), c.squaredNorm() - 1.0);
      },
      true, "quartic piece");
  ScanOptions options;
  CVector center = zeros(2);
  center(0) = cd(0.0, 0.5);
  options.center = center;
  options.extra_points = {zeros(2)};
  auto scan = spc_global_scan(*piece, 16, options);
  CHECK(scan.worst.fit.exponent <= 0.5 - 0.2);
  CHECK(std::abs(scan.worst.fit.exponent - 0.25) <= 0.02);
  CHECK(scan.witness_xi.norm() <= 1e-9);
}

TEST_CASE("squeezing lower bound") {
  CHECK(squeezing_lower_bound(*make_ball(2), zeros(2)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(squeezing_lower_bound(*make_ellipsoid({2.0, 1.0}), zeros(2)) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(squeezing_lower_bound(*make_ball(2), 0.5 * unit(2, 0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  std::mt19937_64 rng(79);
  auto ellipsoid = make_ellipsoid({1.0, 1.3});
  for (int k = 0; k < 3; ++k) {
    double s = squeezing_lower_bound(*ellipsoid, testing::ball_point(rng, 2, 0.5));
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
}

TEST_CASE("Bergman curvature of the ball") {
  CHECK(ball_bergman_curvature(1, zeros(1), unit(1, 0)) == doctest::Approx(-2.0).epsilon(1e-3));
  CHECK(std::abs(ball_bergman_curvature(2, zeros(2), unit(2, 0)) + 4.0 / 3.0) <= 1e-3);
  CHECK(std::abs(ball_bergman_curvature(2, 0.3 * unit(2, 0), unit(2, 1)) + 4.0 / 3.0) <= 1e-3);
}

TEST_CASE("Bergman curvature is constant on the ball") {
  std::mt19937_64 rng(83);
  std::vector<double> h;
  for (int k = 0; k < 100; ++k) {
    CVector z = testing::ball_point(rng, 2, 0.5);
    CVector v = testing::gaussian_vector(rng, 2);
    h.push_back(ball_bergman_curvature(2, z, v));
  }
  double mean = 0.0, var = 0.0;
  for (double x : h) mean += x / h.size();
  for (double x : h) var += (x - mean) * (x - mean) / (h.size() - 1);
  CHECK(std::sqrt(var) <= 1e-3);
}
