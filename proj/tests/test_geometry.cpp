#include <doctest.h>

#include "kobayashi/boundary.hpp"
#include "kobayashi/errors.hpp"
#include "support.hpp"

#include <cmath>
#include <random>

using namespace kobayashi;

namespace {

CVector ie1(int dim, double h) {
  CVector z = zeros(dim);
  z(0) = cd(0.0, h);
  return z;
}

// Distance from i e_1 to the paraboloid Im w_1 = |w_2|^2, by scanning the
// boundary parametrisation w = (x + i s^2, s e^{i phi}). The phase of w_2 and
// the real part x do not change the distance once x = 0, so one parameter
// remains; dense scan then golden refinement.
double siegel_delta_oracle() {
  auto f = [](double s) { return std::sqrt(s * s + (1.0 - s * s) * (1.0 - s * s)); };
  double best_s = 0.0, best = f(0.0);
  for (int k = 0; k <= 20000; ++k) {
    double s = 2.0 * k / 20000.0;
    if (f(s) < best) best = f(s), best_s = s;
  }
  double a = best_s - 1e-4, b = best_s + 1e-4;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  while (b - a > 1e-12) {
    double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return f(0.5 * (a + b));
}

}  // namespace

TEST_CASE("ray hits on model domains") {
  auto ball = make_ball(2);
  CHECK(ray_boundary_hit(*ball, zeros(2), unit(2, 0))->parameter == doctest::Approx(1.0).epsilon(1e-12));

  auto siegel = make_siegel(2);
  CHECK(ray_boundary_hit(*siegel, ie1(2, 1.0), unit(2, 1))->parameter == doctest::Approx(1.0).epsilon(1e-12));
  CVector down = zeros(2);
  down(0) = cd(0.0, -1.0);
  CHECK(ray_boundary_hit(*siegel, ie1(2, 1.0), down)->parameter == doctest::Approx(1.0).epsilon(1e-12));

  for (double h : {1e-3, 1.0, 1e4}) {
    auto hit = ray_boundary_hit(*siegel, ie1(2, h), unit(2, 1));
    REQUIRE(hit.has_value());
    CHECK(std::abs(hit->residual) <= 1e-10 * (1.0 + hit->point.norm()));
    CHECK(hit->parameter == doctest::Approx(std::sqrt(h)).epsilon(1e-12));
  }

  // straight up never leaves the Siegel domain
  CVector up = -down;
  CHECK_FALSE(ray_boundary_hit(*siegel, ie1(2, 1.0), up).has_value());
}

TEST_CASE("ray hit preconditions") {
  auto ball = make_ball(2);
  CVector outside = 2.0 * unit(2, 0);
  try {
    ray_boundary_hit(*ball, outside, unit(2, 1));
    FAIL("expected NotInterior");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInterior);
  }
  try {
    ray_boundary_hit(*ball, zeros(2), zeros(2));
    FAIL("expected ZeroDirection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroDirection);
  }
}

TEST_CASE("boundary distance examples") {
  auto ball = make_ball(2);
  CHECK(delta(*ball, zeros(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(delta(*ball, 0.75 * unit(2, 0)) == doctest::Approx(0.25).epsilon(1e-12));

  auto siegel = make_siegel(2);
  double oracle = siegel_delta_oracle();
  CHECK(oracle == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-10));
  CHECK(delta(*siegel, ie1(2, 1.0)) == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(delta_sampled(*siegel, ie1(2, 1.0)).distance == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("closed form and sampled search agree") {
  std::mt19937_64 rng(11);
  auto ball = make_ball(3);
  for (int k = 0; k < 5; ++k) {
    CVector z = testing::ball_point(rng, 3, 0.8);
    CHECK(delta_sampled(*ball, z).distance == doctest::Approx(delta(*ball, z)).epsilon(1e-6));
  }
  auto siegel = make_siegel(2);
  for (double h : {0.3, 1.0, 2.5}) {
    CVector z = ie1(2, h);
    z(1) = cd(0.1, -0.2);
    CHECK(delta_sampled(*siegel, z).distance == doctest::Approx(delta(*siegel, z)).epsilon(1e-6));
  }
  auto hpp = make_half_plane_product(2);
  CVector z(2);
  z << cd(0.4, 0.7), cd(-1.0, 0.2);
  CHECK(delta(*hpp, z) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(delta_sampled(*hpp, z).distance == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("complex-line distance examples") {
  auto siegel = make_siegel(2);
  CHECK(*delta_dir(*siegel, ie1(2, std::exp(2.0)), unit(2, 1)) == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  for (double r : {0.0, 1.0, 3.0})
    CHECK(*delta_dir(*siegel, ie1(2, std::exp(r)), unit(2, 1)) == doctest::Approx(std::exp(r / 2)).epsilon(1e-9));

  auto quartic = make_power_epigraph({2});
  CHECK(*delta_dir(*quartic, ie1(2, 1e-4), unit(2, 1)) == doctest::Approx(0.1).epsilon(1e-8));

  auto ball = make_ball(2);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 4; ++k) {
    CVector v = testing::gaussian_vector(rng, 2);
    CHECK(*delta_dir(*ball, zeros(2), v / v.norm()) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("complex-line distance dominates the boundary distance") {
  std::mt19937_64 rng(5);
  auto ellipsoid = make_ellipsoid({1.0, 2.0});
  for (int k = 0; k < 10; ++k) {
    CVector z = testing::ball_point(rng, 2, 0.6);
    CVector v = testing::gaussian_vector(rng, 2);
    double dz = delta_sampled(*ellipsoid, z).distance;
    CHECK(*delta_dir(*ellipsoid, z, v) >= dz - 1e-8);
    // same complex line for any nonzero scalar multiple
    cd c(-0.7, 2.3);
    CHECK(*delta_dir(*ellipsoid, z, c * v) == doctest::Approx(*delta_dir(*ellipsoid, z, v)).epsilon(1e-9));
  }
}

TEST_CASE("unitary equivariance") {
  std::mt19937_64 rng(17);
  auto base = make_ellipsoid({1.0, 1.5});
  for (int k = 0; k < 4; ++k) {
    CMatrix U = testing::random_unitary(rng, 2);
    auto image = make_affine_image(AffineMap::linear(U), base);
    CVector z = testing::ball_point(rng, 2, 0.7);
    CVector v = testing::gaussian_vector(rng, 2);
    CHECK(std::abs(delta(*image, U * z) - delta(*base, z)) <= 1e-8);
    CHECK(std::abs(*delta_dir(*image, U * z, U * v) - *delta_dir(*base, z, v)) <= 1e-8);
  }
}

TEST_CASE("affine image membership is exact") {
  std::mt19937_64 rng(23);
  auto base = make_siegel(2);
  CMatrix L(2, 2);
  L << cd(2.0, 0.0), cd(0.5, 1.0), cd(0.0, 0.0), cd(0.0, -3.0);
  CVector b(2);
  b << cd(1.0, -2.0), cd(0.3, 0.3);
  AffineMap A(L, b);
  auto image = make_affine_image(A, base);
  for (int k = 0; k < 1000; ++k) {
    CVector z = 2.0 * testing::gaussian_vector(rng, 2);
    CHECK(image->contains(A.apply(z)) == base->contains(z));
  }
}

TEST_CASE("convexity probe") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u;
  std::vector<DomainPtr> domains{make_ball(2), make_siegel(2), make_power_epigraph({3}), make_unit_cube(2),
                                 make_polydisk(2), make_ellipsoid({1.0, 0.5})};
  for (const auto& domain : domains) {
    auto member = [&] {
      for (;;) {
        CVector z = testing::ball_point(rng, 2, 1.5);
        if (domain->contains(z)) return z;
      }
    };
    int violations = 0;
    for (int pair = 0; pair < 1000; ++pair) {
      CVector z = member(), w = member();
      double t = u(rng);
      if (!domain->contains((1.0 - t) * z + t * w)) ++violations;
    }
    CHECK_MESSAGE(violations == 0, domain->describe());
  }
}

TEST_CASE("supporting functional at e_1 of the ball") {
  auto ball = make_ball(2);
  auto P = supporting_functional(*ball, unit(2, 0));
  CHECK(std::abs(P(unit(2, 0))) <= 1e-12);
  std::mt19937_64 rng(31);
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    CVector z = testing::ball_point(rng, 2, 0.999999);
    if (!(P(z).imag() > 0.0)) ++bad;
    // proportional to i (1 - z_1) with a positive factor
    cd ref(0.0, 1.0);
    ref *= 1.0 - z(0);
    if (std::abs(P(z) - ref) > 1e-10 * (1.0 + std::abs(ref))) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("supporting functional at the origin of the Siegel domain is z_1") {
  auto siegel = make_siegel(2);
  auto P = supporting_functional(*siegel, zeros(2));
  CVector z(2);
  z << cd(0.3, 2.0), cd(-1.0, 0.5);
  CHECK(std::abs(P(z) - z(0)) <= 1e-12);
  CHECK_FALSE(P.non_smooth);
}

TEST_CASE("supporting functional rejects interior points and flags corners") {
  auto ball = make_ball(2);
  CHECK_THROWS_AS(supporting_functional(*ball, 0.5 * unit(2, 0)), Error);
  auto cube = make_unit_cube(1);
  CVector corner(1);
  corner(0) = cd(1.0, 1.0);
  auto P = supporting_functional(*cube, corner);
  CHECK(P.non_smooth);
  CHECK(std::abs(P(corner)) <= 1e-12);
}

TEST_CASE("polytopes must not contain lines") {
  std::vector<HalfSpace> faces{{unit(2, 0), 1.0}, {-unit(2, 0), 1.0}};
  CHECK_THROWS_AS(make_polytope(2, faces), Error);
}

TEST_CASE("unit square distances") {
  auto cube = make_unit_cube(1);
  CVector z(1);
  z(0) = cd(0.5, -0.2);
  CHECK(delta(*cube, z) == doctest::Approx(0.5).epsilon(1e-9));
}
