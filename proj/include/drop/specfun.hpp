#pragma once

#include <utility>
#include <vector>

namespace drop {

/// Gauss-Legendre rule on (-1,1). Nodes are strictly interior and
/// symmetric about 0; weights sum to 2.
struct GaussGrid {
  int order = 0;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive
};

/// Values and first two t-derivatives of P_0..P_lmax at the grid nodes.
/// All degrees are tabulated (the recurrences need them); the projection
/// API exposes only even degrees.
struct LegendreTable {
  int lmax = 0;
  // value[l][i] = P_l(nodes[i]); same layout for deriv1, deriv2.
  std::vector<std::vector<double>> value, deriv1, deriv2;
};

/// Nodes by Newton iteration on P_n from Chebyshev-type initial guesses.
/// Throws std::invalid_argument for n < 2.
GaussGrid gauss_legendre(int n);

/// Throws std::invalid_argument unless lmax >= 4 and even.
LegendreTable legendre_table(int lmax, const GaussGrid& grid);

/// P_l(t), P_l'(t), P_l''(t) for l = 0..lmax at an arbitrary point.
/// Row k of the result is degree k.
void legendre_eval(int lmax, double t, std::vector<double>& p,
                   std::vector<double>& dp, std::vector<double>& ddp);

/// Even-mode Legendre coefficients of a field sampled on the grid:
/// c_l = (2l+1)/2 * sum_i w_i f_i P_l(t_i), returned for l = 0,2,..,lmax
/// (index k holds degree 2k). Throws std::invalid_argument on a length
/// mismatch.
std::vector<double> project(const std::vector<double>& field,
                            const GaussGrid& grid, const LegendreTable& table);

/// Reconstruct samples of sum_k c_k P_{2k} on the grid nodes.
std::vector<double> reconstruct(const std::vector<double>& even_coeffs,
                                const GaussGrid& grid,
                                const LegendreTable& table);

/// Funk-Hecke multiplier of the kernel |w - w'|^{-1} on degree-l
/// spherical harmonics: 4*pi/(2l+1). Throws std::domain_error for l < 0.
double funk_hecke_coulomb(int l);

/// Complete elliptic integrals K(m), E(m) in the parameter convention
/// K(m) = int_0^{pi/2} (1 - m sin^2 u)^{-1/2} du. AGM iteration; the
/// E branch for m > 1/2 goes through the Legendre relation with the
/// complementary modulus so the result stays accurate as m -> 1.
/// Throws std::domain_error for m >= 1 (K is singular there).
std::pair<double, double> elliptic_ke(double m);

/// Same, parametrized by the complementary parameter m1 = 1 - m, which
/// callers can often form without cancellation. Requires m1 > 0.
std::pair<double, double> elliptic_ke_complement(double m1);

namespace detail {
/// K(m) together with the AGM tail sum s_tail = sum_{n>=1} 2^{n-1} c_n^2.
/// E(m) = K (1 - m/2 - s_tail); the azimuthal kernel moments reuse s_tail
/// directly to avoid the K - E cancellation at small m.
struct AgmSums {
  double K;
  double s_tail;
};
AgmSums agm_sums(double m, double m1);
}  // namespace detail

}  // namespace drop
