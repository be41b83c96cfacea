#pragma once

#include <vector>

#include "drop/coulomb.hpp"
#include "drop/shape.hpp"
#include "drop/specfun.hpp"

namespace drop {

/// Coefficient per even degree l in {0, 2, .., lmax}; index k holds
/// degree 2k. Represents a shape deviation chi or a projected residual.
using ModeVector = std::vector<double>;

/// Constants of the bifurcation problem.
namespace constants {
/// R_* = (30 / 4 pi)^{1/3}: the ball of this radius has volume 10.
double r_star();
/// A_c = 5 (2 - 2^{2/3}) / (2^{2/3} - 1), where one ball and two
/// distant half-volume balls have equal energy.
double a_critical();
/// Degree-4 and degree-0 coefficients of the second-order branch
/// correction: (6^3 / (17*35)) / R_* and -(2/15) / R_*.
double q4();
double q0();
}  // namespace constants

/// Eigenvalue of the linearized map on degree-l spherical harmonics:
/// l(l+1) - 2 - (4 pi / 3) R^3 (1 - 3/(2l+1)).
double analytic_eigenvalue(int l, double R);

/// Discretization context for the equilibrium operator
///   F(phi) = F_P(phi) + F_C(phi)
/// and the bifurcation map Phi(R, chi) = R^2 (F(R + chi) - F(R)),
/// collocated at Gauss nodes and projected on even Legendre modes.
///
/// All evaluations are pure; the only mutable state is a one-entry cache
/// of the ball operator field keyed by R, which exists because Newton
/// iterations and Jacobian columns at fixed R share it.
class DropletOperator {
 public:
  DropletOperator(int lmax, int grid_order);

  int lmax() const { return lmax_; }
  int n_modes() const { return lmax_ / 2 + 1; }
  const GaussGrid& grid() const { return grid_; }
  const LegendreTable& table() const { return table_; }

  /// Pointwise local part F_P at the grid nodes, with analytic phi
  /// derivatives from the Legendre recurrences.
  GridField local_operator(const Shape& shape) const;

  /// F = F_P + F_C; constant (== mu) exactly at a critical point.
  GridField full_operator(const Shape& shape) const;

  /// Even-mode projection of Phi(R, chi) = R^2 (F(R+chi) - F(R)).
  /// Identically zero (bitwise) for chi = 0.
  ModeVector residual(double R, const ModeVector& chi) const;

  /// (2 Per / 3 + 5 D / 3) / |Omega|.
  double mu_virial(const Shape& shape) const;

  /// Central-difference Jacobian of the residual in mode space, columns
  /// ordered by even degree. With check_step set, the matrix is also
  /// formed at twice the step and a disagreement beyond `step_check_tol`
  /// raises std::runtime_error with diagnostics.
  std::vector<ModeVector> linearization_matrix(double R, const ModeVector& chi,
                                               double fd_step,
                                               bool check_step = false,
                                               double step_check_tol = 1e-3) const;

  /// Second difference [Phi(R, hP) + Phi(R, -hP)] / h^2 as an
  /// un-projected grid field, Richardson-extrapolated over h and h/2.
  GridField second_variation_pp(double R, double fd_step) const;

  /// Finite-difference d/dR of the degree-2 coefficient of the
  /// linearization applied to P, at R = R_*. Expected -12 / R_*.
  double transversality_check(double fd_step_mode, double fd_step_radius) const;

  Shape shape_of(double R, const ModeVector& chi) const;

 private:
  GridField ball_operator(double R) const;

  int lmax_;
  GaussGrid grid_;
  LegendreTable table_;
  mutable double cached_ball_r_ = -1.0;
  mutable GridField cached_ball_field_;
};

}  // namespace drop
