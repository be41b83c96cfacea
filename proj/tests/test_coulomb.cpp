#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "drop/coulomb.hpp"

using namespace drop;

namespace {

constexpr double kPi = std::numbers::pi;
const double kRStar = std::cbrt(30.0 / (4.0 * kPi));

// direct psi quadrature of the kernel moments (midpoint, spectrally
// accurate for the smooth periodic integrand away from coincidence)
void brute_moments(double rho, double theta, double rho2, double theta2,
                   int n, double& i0, double& i1, double& j0, double& j1) {
  i0 = i1 = j0 = j1 = 0.0;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ct2 = std::cos(theta2), st2 = std::sin(theta2);
  for (int k = 0; k < n; ++k) {
    const double psi = 2.0 * kPi * (k + 0.5) / n;
    const double cosg = ct * ct2 + st * st2 * std::cos(psi);
    const double d =
        std::sqrt(rho * rho + rho2 * rho2 - 2.0 * rho * rho2 * cosg);
    i0 += 1.0 / d;
    i1 += std::cos(psi) / d;
    j0 += d;
    j1 += std::cos(psi) * d;
  }
  const double h = 2.0 * kPi / n;
  i0 *= h;
  i1 *= h;
  j0 *= h;
  j1 *= h;
}

}  // namespace

TEST_CASE("azimuthal and distance moments match direct psi quadrature") {
  struct Case {
    double rho, theta, rho2, theta2;
  };
  for (const Case& c : {Case{1.0, kPi / 2, 1.0, kPi / 2 + 0.3},
                        Case{1.2, 1.0, 0.9, 1.7},
                        Case{0.8, 0.3, 1.4, 2.6},
                        Case{1.0, 1.3, 1.0, 1.35}}) {
    double i0, i1, j0, j1;
    brute_moments(c.rho, c.theta, c.rho2, c.theta2, 2048, i0, i1, j0, j1);
    const AzimuthalMoments am =
        azimuthal_moments(c.rho, c.theta, c.rho2, c.theta2);
    const DistanceMoments dm =
        distance_moments(c.rho, c.theta, c.rho2, c.theta2);
    CHECK(am.i0 == doctest::Approx(i0).epsilon(1e-12));
    CHECK(am.i1 == doctest::Approx(i1).epsilon(1e-11).scale(i0));
    CHECK(dm.j0 == doctest::Approx(j0).epsilon(1e-12));
    CHECK(dm.j1 == doctest::Approx(j1).epsilon(1e-11).scale(j0));
    CHECK(am.i0 > 0.0);
    CHECK(std::abs(am.i1) < am.i0);
  }
}

TEST_CASE("near-coincident moments follow the logarithmic growth law") {
  // i0 ~ -(4/b) log(separation) + const with b the diameter of the
  // latitude circle, so successive decades add the same increment
  const double theta = 1.3;
  auto i0_at = [&](double sep) {
    return azimuthal_moments(1.0, theta, 1.0, theta + sep).i0;
  };
  const double d2 = i0_at(1e-2), d3 = i0_at(1e-3), d4 = i0_at(1e-4),
               d5 = i0_at(1e-5);
  CHECK(d4 > d3);
  CHECK(d3 > d2);
  CHECK((d4 - d3) / (d3 - d2) == doctest::Approx(1.0).epsilon(0.01));
  const double b = 2.0 * std::sin(theta);
  CHECK(d5 - d4 == doctest::Approx(4.0 / b * std::log(10.0)).epsilon(1e-3));
}

TEST_CASE("moment symmetries") {
  const AzimuthalMoments a = azimuthal_moments(1.1, 0.8, 0.9, 1.9);
  const AzimuthalMoments b = azimuthal_moments(0.9, 1.9, 1.1, 0.8);
  CHECK(a.i0 == doctest::Approx(b.i0).epsilon(1e-14));
  // mirror pair theta -> pi - theta
  const AzimuthalMoments c = azimuthal_moments(1.0, 0.6, 1.0, 1.1);
  const AzimuthalMoments d =
      azimuthal_moments(1.0, kPi - 0.6, 1.0, kPi - 1.1);
  CHECK(c.i0 == doctest::Approx(d.i0).epsilon(1e-13));
  // axis source: cos psi integrates against a constant distance
  const AzimuthalMoments e = azimuthal_moments(1.0, 1.2, 0.7, 0.0);
  CHECK(e.i1 == 0.0);
}

TEST_CASE("coincident points are rejected") {
  CHECK_THROWS_AS(azimuthal_moments(1.0, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(azimuthal_moments(-1.0, 1.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("ball potential is constant (4 pi / 3) R^2") {
  const GaussGrid g = gauss_legendre(96);
  for (double r : {1.0, kRStar}) {
    const GridField v = surface_potential(make_shape(r, {}), g);
    for (double vi : v.values)
      CHECK(vi == doctest::Approx(4.0 * kPi / 3.0 * r * r).epsilon(1e-11));
  }
}

TEST_CASE("potential of a perturbed ball follows the linearized kernel") {
  // V ~ (4 pi/3) R^2 + eps R (4 pi/5 - 4 pi/3) P_2(t) + O(eps^2)
  const GaussGrid g = gauss_legendre(96);
  const LegendreTable tab = legendre_table(4, g);
  const double eps = 0.05;
  const GridField v = surface_potential(make_shape(kRStar, {0.0, eps}), g);
  double worst = 0.0;
  for (int i = 0; i < g.order; ++i) {
    const double model =
        4.0 * kPi / 3.0 * kRStar * kRStar +
        eps * kRStar * (4.0 * kPi / 5.0 - 4.0 * kPi / 3.0) * tab.value[2][i];
    worst = std::max(worst, std::abs(v.values[i] - model));
  }
  CHECK(worst < 4.0 * eps * eps);
}

TEST_CASE("potential is positive and even on a generic shape") {
  const GaussGrid g = gauss_legendre(96);
  const GridField v = surface_potential(make_shape(1.0, {0.05, 0.18, -0.06}), g);
  for (int i = 0; i < g.order; ++i) {
    CHECK(v.values[i] > 0.0);
    CHECK(v.values[i] ==
          doctest::Approx(v.values[g.order - 1 - i]).epsilon(1e-11));
  }
}

TEST_CASE("ball coulomb energy, all three routes") {
  const GaussGrid g = gauss_legendre(96);
  for (double r : {1.0, kRStar}) {
    const Shape ball = make_shape(r, {});
    const double exact = 16.0 * kPi * kPi / 15.0 * std::pow(r, 5);
    CHECK(coulomb_energy(ball, g) == doctest::Approx(exact).epsilon(1e-10));
    CHECK(coulomb_energy_double_surface(ball, g) ==
          doctest::Approx(exact).epsilon(1e-10));
    CHECK(coulomb_energy_oracle(ball) == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("oracle agrees with the production route on a deformed shape") {
  const GaussGrid g = gauss_legendre(96);
  const Shape s = make_shape(1.0, {0.0, 0.13, -0.07});
  const double d = coulomb_energy(s, g);
  CHECK(coulomb_energy_oracle(s) == doctest::Approx(d).epsilon(1e-5));
  // two disjoint oracle resolutions agree on the unit ball
  const Shape b = make_shape(1.0, {});
  CHECK(coulomb_energy_oracle(b, 24, 30, 12) ==
        doctest::Approx(coulomb_energy_oracle(b, 31, 26, 15)).epsilon(1e-6));
}

TEST_CASE("virial identity holds across shapes") {
  const GaussGrid g = gauss_legendre(96);
  CHECK(virial_defect(make_shape(1.0, {}), g) < 1e-10);
  CHECK(virial_defect(make_shape(kRStar, {0.0, 0.1}), g) < 1e-6);
  CHECK(virial_defect(make_shape(1.0, {0.0, 0.2, 0.1}), g) < 1e-6);
}

TEST_CASE("coulomb energy scales as length^5") {
  const GaussGrid g = gauss_legendre(96);
  const Shape s = make_shape(1.0, {0.0, 0.15, 0.04});
  Shape scaled = s;
  const double lam = 1.31;
  scaled.base_radius *= lam;
  for (double& c : scaled.coeffs) c *= lam;
  CHECK(coulomb_energy(scaled, g) ==
        doctest::Approx(std::pow(lam, 5) * coulomb_energy(s, g))
            .epsilon(1e-10));
}

TEST_CASE("unit sphere kernel acts diagonally with 4 pi / (2l + 1)") {
  const GaussGrid g = gauss_legendre(96);
  const LegendreTable tab = legendre_table(8, g);
  for (int l = 0; l <= 8; l += 2) {
    std::vector<double> coeffs(l / 2 + 1, 0.0);
    coeffs[l / 2] = 1.0;
    const GridField out = sphere_kernel_apply(coeffs, g);
    const double mult = 4.0 * kPi / (2 * l + 1);
    for (int i = 0; i < g.order; ++i)
      CHECK(std::abs(out.values[i] - mult * tab.value[l][i]) < 1e-6);
  }
}
