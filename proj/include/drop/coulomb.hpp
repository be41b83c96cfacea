#pragma once

#include "drop/shape.hpp"
#include "drop/specfun.hpp"

namespace drop {

/// Reduced azimuthal moments of the Newtonian kernel between two circles
/// of the axisymmetric surface, at generating-curve points (rho, theta)
/// and (rho2, theta2):
///   i0 = oint dpsi / |x - y|,   i1 = oint cos(psi) dpsi / |x - y|,
/// psi the relative azimuth. Always i0 > 0 and |i1| < i0.
struct AzimuthalMoments {
  double i0 = 0.0;
  double i1 = 0.0;
};

/// Moments of the |x - y| kernel (used by the double-surface form of D):
///   j0 = oint |x - y| dpsi,     j1 = oint cos(psi) |x - y| dpsi.
struct DistanceMoments {
  double j0 = 0.0;
  double j1 = 0.0;
};

/// Throws std::domain_error on coincident points (the caller must route
/// those through the singular-panel quadrature instead).
AzimuthalMoments azimuthal_moments(double rho, double theta, double rho2,
                                   double theta2);
DistanceMoments distance_moments(double rho, double theta, double rho2,
                                 double theta2);

/// Newtonian potential V(phi(t) omega) at every grid node, computed from
/// the surface-integral form of the volume potential with the azimuthal
/// elliptic reduction. The logarithmic singularity at theta' = theta is
/// resolved by dyadically graded panels around each target. Summation
/// order is fixed, so results do not depend on the thread count.
GridField surface_potential(const Shape& shape, const GaussGrid& grid);

/// D[Omega_phi] through the virial identity: int phi^3 V domega = 5 D.
double coulomb_energy(const Shape& shape, const GaussGrid& grid);
double coulomb_energy(const Shape& shape, const GaussGrid& grid,
                      const GridField& potential);

/// Independent route: the double surface integral
///   D = -(1/4) iint phi phi' (phi w - grad phi).(phi' w' - grad phi')
///                 |phi w - phi' w'| dw dw'.
double coulomb_energy_double_surface(const Shape& shape, const GaussGrid& grid);

/// Brute-force evaluation of the volume double integral in (t, t', psi, r)
/// with the innermost radial integral in closed form and graded panels
/// toward the angular singularity. Small resolutions only.
double coulomb_energy_oracle(const Shape& shape, int n_t = 24, int depth = 30,
                             int n_r = 12);

/// |int phi^3 V - 5 D_ds| / (5 D_ds), D_ds from the double-surface route.
double virial_defect(const Shape& shape, const GaussGrid& grid);

/// Action of the unit-sphere kernel |w - w'|^{-1} on a band-limited even
/// field given by Legendre coefficients (index k -> degree 2k); returns
/// samples at the grid nodes. Diagnostic for the Funk-Hecke multipliers.
GridField sphere_kernel_apply(const std::vector<double>& even_coeffs,
                              const GaussGrid& grid);

}  // namespace drop
