#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "drop/drop_operator.hpp"

using namespace drop;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("bifurcation constants") {
  const double rs = constants::r_star();
  CHECK(4.0 * kPi / 3.0 * rs * rs * rs == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(constants::a_critical() == doctest::Approx(3.512074).epsilon(1e-5));
  CHECK(constants::q4() == doctest::Approx(216.0 / 595.0 / rs).epsilon(1e-15));
  CHECK(constants::q0() == doctest::Approx(-2.0 / 15.0 / rs).epsilon(1e-15));
}

TEST_CASE("analytic eigenvalues at the landmark degrees") {
  const double rs = constants::r_star();
  // translations are neutral at every radius
  for (double r : {0.5, 1.0, rs, 2.0})
    CHECK(std::abs(analytic_eigenvalue(1, r)) < 1e-14);
  // degree 2 crosses zero exactly at the bifurcation radius
  CHECK(std::abs(analytic_eigenvalue(2, rs)) < 1e-13);
  CHECK(analytic_eigenvalue(2, 1.0) ==
        doctest::Approx(4.0 - 8.0 * kPi / 15.0).epsilon(1e-15));
  CHECK(analytic_eigenvalue(4, rs) == doctest::Approx(34.0 / 3.0).epsilon(1e-14));
  // degree 2 is stable below and unstable above the crossing
  CHECK(analytic_eigenvalue(2, 0.9 * rs) > 0.0);
  CHECK(analytic_eigenvalue(2, 1.1 * rs) < 0.0);
}

TEST_CASE("local part of the operator is 2/R on a ball") {
  const DropletOperator op(8, 48);
  for (double r : {0.7, 1.0, constants::r_star()}) {
    const GridField f = op.local_operator(make_shape(r, {}));
    for (double v : f.values)
      CHECK(v == doctest::Approx(2.0 / r).epsilon(1e-12));
  }
}

TEST_CASE("full operator on a ball is the constant 2/R + (4 pi/3) R^2") {
  const DropletOperator op(8, 48);
  for (double r : {1.0, constants::r_star()}) {
    const double mu = 2.0 / r + 4.0 * kPi / 3.0 * r * r;
    const GridField f = op.full_operator(make_shape(r, {}));
    for (double v : f.values) CHECK(v == doctest::Approx(mu).epsilon(1e-10));
  }
  // at the bifurcation radius the constant collapses to 12 / R_*
  const double rs = constants::r_star();
  CHECK(2.0 / rs + 4.0 * kPi / 3.0 * rs * rs ==
        doctest::Approx(12.0 / rs).epsilon(1e-14));
}

TEST_CASE("full operator is genuinely non-constant off equilibrium") {
  const DropletOperator op(8, 48);
  const GridField f =
      op.full_operator(make_shape(constants::r_star(), {0.0, 0.3}));
  double lo = f.values[0], hi = f.values[0];
  for (double v : f.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi - lo > 1e-3);
}

TEST_CASE("residual vanishes bitwise at chi = 0") {
  const DropletOperator op(8, 48);
  for (double r : {1.0, constants::r_star()}) {
    const ModeVector res = op.residual(r, ModeVector(op.n_modes(), 0.0));
    for (double v : res) CHECK(v == 0.0);
  }
}

TEST_CASE("residual is eigenvalue-linear in a small single mode") {
  const DropletOperator op(8, 48);
  const double eps = 1e-4;
  for (double r : {1.0, constants::r_star()}) {
    ModeVector chi(op.n_modes(), 0.0);
    chi[1] = eps;
    const ModeVector res = op.residual(r, chi);
    CHECK(res[1] == doctest::Approx(eps * analytic_eigenvalue(2, r))
                        .epsilon(1e-6)
                        .scale(1.0));
  }
}

TEST_CASE("virial chemical potential on balls") {
  const DropletOperator op(8, 48);
  for (double r : {0.9, 1.0, constants::r_star()})
    CHECK(op.mu_virial(make_shape(r, {})) ==
          doctest::Approx(2.0 / r + 4.0 * kPi / 3.0 * r * r).epsilon(1e-10));
}

TEST_CASE("linearization at the ball is diagonal with the analytic spectrum") {
  const DropletOperator op(8, 48);
  const ModeVector zero(op.n_modes(), 0.0);
  for (double r : {0.8, 1.0, constants::r_star(), 1.5}) {
    const auto m = op.linearization_matrix(r, zero, 1e-5);
    for (int i = 0; i < op.n_modes(); ++i)
      for (int j = 0; j < op.n_modes(); ++j) {
        if (i == j)
          CHECK(std::abs(m[i][i] - analytic_eigenvalue(2 * i, r)) < 1e-5);
        else
          CHECK(std::abs(m[i][j]) < 1e-6);
      }
  }
}

TEST_CASE("step-halving guard rejects an absurd finite-difference step") {
  const DropletOperator op(8, 48);
  const ModeVector zero(op.n_modes(), 0.0);
  CHECK_THROWS_AS(op.linearization_matrix(1.0, zero, 0.2, true, 1e-8),
                  std::runtime_error);
  CHECK_NOTHROW(op.linearization_matrix(1.0, zero, 1e-5, true));
}

TEST_CASE("second variation along the critical mode") {
  const DropletOperator op(8, 96);
  const double rs = constants::r_star();
  const GridField sv = op.second_variation_pp(rs, 1e-4);
  const auto c = project(sv.values, op.grid(), op.table());
  CHECK(c[0] == doctest::Approx(24.0 / (5.0 * rs)).epsilon(1e-4));
  CHECK(c[1] == doctest::Approx(-24.0 / (7.0 * rs)).epsilon(1e-4));
  CHECK(c[2] == doctest::Approx(-288.0 / (35.0 * rs)).epsilon(1e-4));
  for (size_t k = 3; k < c.size(); ++k) CHECK(std::abs(c[k]) < 1e-4);
}

TEST_CASE("radius derivative of the critical-mode eigenvalue") {
  const DropletOperator op(8, 96);
  CHECK(op.transversality_check(1e-5, 1e-5) ==
        doctest::Approx(-12.0 / constants::r_star()).epsilon(2e-4));
}
