#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "drop/shape.hpp"

using namespace drop;

namespace {
constexpr double kPi = std::numbers::pi;
const double kRStar = std::cbrt(30.0 / (4.0 * kPi));
}

TEST_CASE("make_shape accepts balls and mild deformations") {
  CHECK_NOTHROW(make_shape(1.0, {}));
  CHECK_NOTHROW(make_shape(kRStar, {0.0, 0.1}));
}

TEST_CASE("make_shape rejects non-positive profiles") {
  CHECK_THROWS_AS(make_shape(1.0, {0.0, -3.0}), std::domain_error);
  CHECK_THROWS_AS(make_shape(0.0, {}), std::domain_error);
  CHECK_THROWS_AS(make_shape(-2.0, {}), std::domain_error);
}

TEST_CASE("eval_radius: balls and single modes") {
  double phi, phi_t, phi_tt;
  const Shape ball = make_shape(2.0, {});
  eval_radius(ball, 0.37, phi, phi_t, phi_tt);
  CHECK(phi == 2.0);
  CHECK(phi_t == 0.0);
  CHECK(phi_tt == 0.0);

  const Shape p2 = make_shape(1.0, {0.0, 1.0});
  eval_radius(p2, 0.0, phi, phi_t, phi_tt);
  CHECK(phi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi_t == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(phi_tt == doctest::Approx(3.0).epsilon(1e-14));

  const Shape p4 = make_shape(1.0, {0.0, 0.0, 1.0});
  eval_radius(p4, 1.0, phi, phi_t, phi_tt);
  CHECK(phi == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(phi_t == doctest::Approx(10.0).epsilon(1e-14));
  // P_l''(1) = (l-1) l (l+1) (l+2) / 8
  CHECK(phi_tt == doctest::Approx(45.0).epsilon(1e-13));
}

TEST_CASE("ball volumes and perimeters") {
  const GaussGrid g = gauss_legendre(96);
  for (double r : {0.7, 1.0, 2.5}) {
    const Shape ball = make_shape(r, {});
    CHECK(volume(ball, g) ==
          doctest::Approx(4.0 * kPi / 3.0 * r * r * r).epsilon(1e-13));
    CHECK(perimeter(ball, g) ==
          doctest::Approx(4.0 * kPi * r * r).epsilon(1e-13));
  }
  CHECK(volume(make_shape(kRStar, {}), g) == doctest::Approx(10.0).epsilon(1e-13));
}

TEST_CASE("deformed volume against a 10x resolution quadrature") {
  const Shape s = make_shape(1.0, {0.0, 0.2});
  const double v = volume(s, gauss_legendre(96));
  const double v10 = volume(s, gauss_legendre(960));
  CHECK(v == doctest::Approx(v10).epsilon(1e-13));
}

TEST_CASE("volume is grid independent once the rule resolves phi^3") {
  // band limit 16: order >= (3*16 + 2)/2 = 25 suffices
  Shape s = make_shape(1.0, {0.02, 0.15, -0.05, 0.01, 0.0, 0.0, 0.0, 0.0, 0.003});
  const double a = volume(s, gauss_legendre(25));
  const double b = volume(s, gauss_legendre(96));
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("scaling laws for volume and perimeter") {
  const GaussGrid g = gauss_legendre(96);
  const Shape s = make_shape(1.1, {0.03, 0.2, -0.08});
  const double lam = 1.7;
  Shape scaled = s;
  scaled.base_radius *= lam;
  for (double& c : scaled.coeffs) c *= lam;
  CHECK(volume(scaled, g) ==
        doctest::Approx(lam * lam * lam * volume(s, g)).epsilon(1e-12));
  CHECK(perimeter(scaled, g) ==
        doctest::Approx(lam * lam * perimeter(s, g)).epsilon(1e-12));
}

TEST_CASE("perimeter beats the isoperimetric bound, strictly off the ball") {
  const GaussGrid g = gauss_legendre(96);
  for (auto coeffs : {std::vector<double>{0.0, 0.2},
                      std::vector<double>{0.0, 0.0, 0.15},
                      std::vector<double>{-0.05, 0.1, 0.1}}) {
    const Shape s = make_shape(1.0, coeffs);
    const double bound = std::cbrt(36.0 * kPi * volume(s, g) * volume(s, g));
    CHECK(perimeter(s, g) > bound);
  }
  const Shape ball = make_shape(1.3, {});
  const double bound =
      std::cbrt(36.0 * kPi * volume(ball, g) * volume(ball, g));
  CHECK(perimeter(ball, g) == doctest::Approx(bound).epsilon(1e-12));
}

TEST_CASE("ball reference closed forms") {
  const EnergyReport r1 = ball_reference(1.0);
  CHECK(r1.coulomb == doctest::Approx(16.0 * kPi * kPi / 15.0).epsilon(1e-15));
  CHECK(r1.total == doctest::Approx(4.0 * kPi + 16.0 * kPi * kPi / 15.0).epsilon(1e-15));
  const EnergyReport rs = ball_reference(kRStar);
  CHECK(rs.mu_virial == doctest::Approx(12.0 / kRStar).epsilon(1e-14));
  CHECK(rs.volume == doctest::Approx(10.0).epsilon(1e-14));
}

TEST_CASE("shape text round trip is exact") {
  const Shape s = make_shape(1.2345678901234567, {0.1, -0.2, 1.0 / 3.0});
  const Shape back = shape_from_text(shape_to_text(s));
  CHECK(back.base_radius == s.base_radius);
  REQUIRE(back.coeffs.size() == s.coeffs.size());
  for (size_t k = 0; k < s.coeffs.size(); ++k)
    CHECK(back.coeffs[k] == s.coeffs[k]);
}

TEST_CASE("shape text parsing rejects bad input") {
  CHECK_THROWS_AS(shape_from_text("lmax = 4\nc2 = 0.1\n"),
                  std::invalid_argument);  // missing R
  CHECK_THROWS_AS(shape_from_text("R = 1\nc3 = 0.1\n"),
                  std::invalid_argument);  // odd degree
  CHECK_THROWS_AS(shape_from_text("R = 1\nbogus = 2\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(shape_from_text("R = 1\nc2 = -3\n"), std::domain_error);
}
