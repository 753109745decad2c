#include <doctest.h>

#include "kobayashi/metrics.hpp"
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

CVector siegel_point(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(0.05, 3.0);
  CVector z = testing::gaussian_vector(rng, dim);
  double tail = z.tail(dim - 1).squaredNorm();
  z(0) = cd(z(0).real(), tail + u(rng));
  return z;
}

}  // namespace

TEST_CASE("closed forms") {
  CHECK(dist_disk(0.0, 0.0) == 0.0);
  CHECK(dist_disk(0.0, 0.5) == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));

  const cd i(0.0, 1.0);
  CHECK(dist_halfplane(i, i) == 0.0);
  CHECK(dist_halfplane(i, 4.0 * i) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(dist_halfplane(i, std::sqrt(2.0) + i) == doctest::Approx(0.5 * std::acosh(2.0)).epsilon(1e-14));

  CHECK(dist_ball(zeros(2), zeros(2)) == 0.0);
  CHECK(dist_ball(zeros(2), 0.5 * unit(2, 0)) == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));

  CHECK(dist_siegel(ie1(2, 1.0), ie1(2, 1.0)) == 0.0);
  CHECK(dist_siegel(ie1(1, 1.0), ie1(1, 4.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(dist_siegel(ie1(2, 1.0), ie1(2, std::exp(2.0))) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Siegel distance agrees with the ball through the Cayley map") {
  std::mt19937_64 rng(41);
  for (int dim = 1; dim <= 3; ++dim) {
    for (int k = 0; k < 200; ++k) {
      CVector w1 = siegel_point(rng, dim), w2 = siegel_point(rng, dim);
      CVector z1 = cayley_to_ball(w1), z2 = cayley_to_ball(w2);
      REQUIRE(z1.norm() < 1.0);
      CHECK((cayley_from_ball(z1) - w1).norm() <= 1e-10 * (1.0 + w1.norm()));
      double ref = dist_ball(z1, z2);
      CHECK(std::abs(dist_siegel(w1, w2) - ref) <= 1e-8 * (1.0 + ref));
    }
  }
}

TEST_CASE("metric axioms") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(0.01, 3.0);
  auto check = [&](auto sample, auto dist) {
    double worst = 0.0;
    bool symmetric = true, nonneg = true;
    for (int k = 0; k < 1000; ++k) {
      auto a = sample(), b = sample(), c = sample();
      double ab = dist(a, b), bc = dist(b, c), ac = dist(a, c);
      symmetric = symmetric && ab == dist(b, a);
      nonneg = nonneg && ab >= 0.0;
      worst = std::max(worst, ac - ab - bc);
    }
    CHECK(symmetric);
    CHECK(nonneg);
    CHECK(worst <= 1e-9);
  };
  check([&] { return testing::ball_point(rng, 1, 0.99)(0); }, [](cd a, cd b) { return dist_disk(a, b); });
  check([&] { return cd(u(rng), h(rng)); }, [](cd a, cd b) { return dist_halfplane(a, b); });
  check([&] { return CVector(testing::ball_point(rng, 3, 0.99)); },
        [](const CVector& a, const CVector& b) { return dist_ball(a, b); });
  check([&] { return siegel_point(rng, 3); }, [](const CVector& a, const CVector& b) { return dist_siegel(a, b); });
}

TEST_CASE("complex-line slice of the Siegel domain is the half-plane") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-3.0, 3.0), h(0.01, 5.0);
  for (int k = 0; k < 200; ++k) {
    cd a(u(rng), h(rng)), b(u(rng), h(rng));
    CVector z = zeros(3), w = zeros(3);
    z(0) = a;
    w(0) = b;
    CHECK(std::abs(dist_siegel(z, w) - dist_halfplane(a, b)) <= 1e-10);
  }
}

TEST_CASE("vertical ray is a unit-speed geodesic") {
  auto gamma = [](double t) { return ie1(2, std::exp(2.0 * t)); };
  double worst = 0.0;
  for (double s = -3.0; s <= 3.0; s += 0.25)
    for (double t = -3.0; t <= 3.0; t += 0.25)
      worst = std::max(worst, std::abs(dist_siegel(gamma(s), gamma(t)) - std::abs(t - s)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("vertical distance is half the log ratio") {
  // ½ arcosh((a/b + b/a)/2) = ½ |log(a/b)|
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 100; ++k) {
    double a = std::exp(u(rng)), b = std::exp(u(rng));
    double ref = 0.5 * std::abs(std::log(a / b));
    CHECK(std::abs(dist_halfplane(cd(0.0, a), cd(0.0, b)) - ref) <= 1e-12 * (1.0 + ref));
  }
}

TEST_CASE("hyperplane lower bound examples") {
  auto half_plane = make_siegel(1);
  CHECK(lower_bound_hyperplane(*half_plane, ie1(1, 1.0), ie1(1, 4.0)).value ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  auto ball = make_ball(2);
  CHECK(lower_bound_hyperplane(*ball, 0.3 * unit(2, 0), 0.3 * unit(2, 0)).value == 0.0);

  auto siegel = make_siegel(2);
  CHECK(lower_bound_hyperplane(*siegel, ie1(2, 1.0), ie1(2, std::exp(2.0))).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chain upper bound examples") {
  auto ball = make_ball(2);
  double up = upper_bound_chain(*ball, zeros(2), 0.5 * unit(2, 0)).value;
  CHECK(up >= std::atanh(0.5) - 1e-12);
  CHECK(up - std::atanh(0.5) <= 1e-3);

  auto siegel = make_siegel(2);
  CHECK(upper_bound_chain(*siegel, ie1(2, 1.0), ie1(2, std::exp(2.0))).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(upper_bound_chain(*ball, 0.2 * unit(2, 1), 0.2 * unit(2, 1)).value == 0.0);
}

TEST_CASE("bracket examples") {
  auto ball = make_ball(2);
  auto same = dist_bounds(*ball, 0.1 * unit(2, 0), 0.1 * unit(2, 0));
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);

  auto siegel = make_siegel(2);
  auto slice = dist_bounds(*siegel, ie1(2, 1.0), ie1(2, std::exp(2.0)));
  CHECK(slice.lower == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(slice.upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("brackets survive affine changes of coordinates") {
  std::mt19937_64 rng(59);
  CMatrix L(2, 2);
  L << cd(1.5, 0.0), cd(0.2, 0.4), cd(0.0, 0.0), cd(0.0, 0.7);
  CVector b(2);
  b << cd(0.3, 0.0), cd(-1.0, 2.0);
  AffineMap A(L, b);
  auto image = make_affine_image(A, make_ball(2));
  for (int k = 0; k < 5; ++k) {
    CVector z1 = testing::ball_point(rng, 2, 0.9), z2 = testing::ball_point(rng, 2, 0.9);
    double exact = dist_ball(z1, z2);
    auto br = dist_bounds(*image, A.apply(z1), A.apply(z2));
    CHECK(br.lower <= exact + 1e-9);
    CHECK(exact <= br.upper + 1e-9);
  }
}

TEST_CASE("infinitesimal metric examples") {
  auto disk = make_ball(1);
  CVector one = unit(1, 0);
  auto k = infinitesimal_estimate(*disk, zeros(1), one);
  CHECK(k.upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k.lower == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(k.lower <= k.upper);

  auto siegel = make_siegel(2);
  auto ks = infinitesimal_estimate(*siegel, ie1(2, 1.0), unit(2, 1));
  CHECK(ks.upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ks.lower <= ks.upper);
}
