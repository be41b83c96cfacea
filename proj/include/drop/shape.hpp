#pragma once

#include <string>
#include <vector>

#include "drop/specfun.hpp"

namespace drop {

/// Axisymmetric star-shaped profile phi(t) = R + sum_{even l} c_l P_l(t),
/// t = omega_3. Only even degrees are representable; index k of coeffs
/// holds the degree-2k coefficient. Positivity of phi is enforced at
/// construction (make_shape).
struct Shape {
  double base_radius = 1.0;
  std::vector<double> coeffs;  // index k -> degree 2k; may be empty (ball)

  int lmax() const { return coeffs.empty() ? 0 : 2 * (int(coeffs.size()) - 1); }
  double coeff(int l) const {
    size_t k = l / 2;
    return k < coeffs.size() ? coeffs[k] : 0.0;
  }
};

/// Samples of an even function of t at the quadrature nodes.
struct GridField {
  std::vector<double> values;
};

struct EnergyReport {
  double volume = 0.0;
  double perimeter = 0.0;
  double coulomb = 0.0;
  double total = 0.0;
  double mu_virial = 0.0;
};

/// Validates star-shapedness: phi > 0 on a dense sample (at least
/// 4*lmax points plus the endpoints). Throws std::domain_error for
/// R <= 0 or a profile touching zero.
Shape make_shape(double R, std::vector<double> even_coeffs);

/// phi, phi_t, phi_tt at an arbitrary t in [-1,1].
void eval_radius(const Shape& shape, double t, double& phi, double& phi_t,
                 double& phi_tt);

/// |Omega_phi| = (2*pi/3) sum_i w_i phi(t_i)^3.
double volume(const Shape& shape, const GaussGrid& grid);

/// Per Omega_phi = 2*pi sum_i w_i phi sqrt(phi^2 + (1-t^2) phi_t^2).
double perimeter(const Shape& shape, const GaussGrid& grid);

/// Closed forms for the ball: |B_R| = (4pi/3)R^3, Per = 4pi R^2,
/// D = (4pi)^2 R^5 / 15, mu = 2/R + (4pi/3) R^2.
EnergyReport ball_reference(double R);

/// Sample phi (and optionally derivatives) on the grid nodes.
GridField sample_radius(const Shape& shape, const GaussGrid& grid);

/// Flat key/value text serialization, 17 significant digits:
///   R = ...\n lmax = ...\n c0 = ...\n c2 = ...\n ...
std::string shape_to_text(const Shape& shape);
Shape shape_from_text(const std::string& text);

}  // namespace drop
