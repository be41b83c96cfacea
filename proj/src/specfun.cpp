#include "drop/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace drop {

namespace {

constexpr double kPi = std::numbers::pi;

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_pn(int n, double x, double& p, double& dp) {
  double pm1 = 1.0, pcur = x;
  for (int l = 1; l < n; ++l) {
    double pnext = ((2 * l + 1) * x * pcur - l * pm1) / (l + 1);
    pm1 = pcur;
    pcur = pnext;
  }
  p = (n == 0) ? 1.0 : pcur;
  // (1-x^2) P_n' = n (P_{n-1} - x P_n)
  dp = (n == 0) ? 0.0 : n * (pm1 - x * pcur) / (1.0 - x * x);
}

}  // namespace

GaussGrid gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
  GaussGrid g;
  g.order = n;
  g.nodes.assign(n, 0.0);
  g.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-type initial guess for the i-th root counted from x = 1.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p = 0.0, dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_pn(n, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pn(n, x, p, dp);
    x -= p / dp;  // one polishing step
    legendre_pn(n, x, p, dp);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[n - 1 - i] = x;
    g.nodes[i] = -x;
    g.weights[n - 1 - i] = w;
    g.weights[i] = w;
  }
  if (n % 2 == 1) g.nodes[n / 2] = 0.0;
  return g;
}

LegendreTable legendre_table(int lmax, const GaussGrid& grid) {
  if (lmax < 4 || lmax % 2 != 0)
    throw std::invalid_argument("legendre_table: lmax must be even and >= 4");
  LegendreTable tab;
  tab.lmax = lmax;
  const int n = grid.order;
  tab.value.assign(lmax + 1, std::vector<double>(n));
  tab.deriv1.assign(lmax + 1, std::vector<double>(n));
  tab.deriv2.assign(lmax + 1, std::vector<double>(n));
  std::vector<double> p, dp, ddp;
  for (int i = 0; i < n; ++i) {
    legendre_eval(lmax, grid.nodes[i], p, dp, ddp);
    for (int l = 0; l <= lmax; ++l) {
      tab.value[l][i] = p[l];
      tab.deriv1[l][i] = dp[l];
      tab.deriv2[l][i] = ddp[l];
    }
  }
  return tab;
}

void legendre_eval(int lmax, double t, std::vector<double>& p,
                   std::vector<double>& dp, std::vector<double>& ddp) {
  p.assign(lmax + 1, 0.0);
  dp.assign(lmax + 1, 0.0);
  ddp.assign(lmax + 1, 0.0);
  p[0] = 1.0;
  if (lmax == 0) return;
  p[1] = t;
  dp[1] = 1.0;
  for (int l = 1; l < lmax; ++l) {
    p[l + 1] = ((2 * l + 1) * t * p[l] - l * p[l - 1]) / (l + 1);
    dp[l + 1] = dp[l - 1] + (2 * l + 1) * p[l];
    ddp[l + 1] = ddp[l - 1] + (2 * l + 1) * dp[l];
  }
}

std::vector<double> project(const std::vector<double>& field,
                            const GaussGrid& grid,
                            const LegendreTable& table) {
  if (field.size() != static_cast<size_t>(grid.order))
    throw std::invalid_argument("project: field length does not match grid");
  std::vector<double> coeffs(table.lmax / 2 + 1, 0.0);
  for (int k = 0; k <= table.lmax / 2; ++k) {
    const auto& pl = table.value[2 * k];
    double acc = 0.0;
    for (int i = 0; i < grid.order; ++i)
      acc += grid.weights[i] * field[i] * pl[i];
    coeffs[k] = 0.5 * (4 * k + 1) * acc;
  }
  return coeffs;
}

std::vector<double> reconstruct(const std::vector<double>& even_coeffs,
                                const GaussGrid& grid,
                                const LegendreTable& table) {
  std::vector<double> out(grid.order, 0.0);
  for (size_t k = 0; k < even_coeffs.size(); ++k) {
    const auto& pl = table.value[2 * k];
    for (int i = 0; i < grid.order; ++i) out[i] += even_coeffs[k] * pl[i];
  }
  return out;
}

double funk_hecke_coulomb(int l) {
  if (l < 0) throw std::domain_error("funk_hecke_coulomb: negative degree");
  return 4.0 * kPi / (2 * l + 1);
}

namespace detail {

// AGM for the parameter pair (m, m1 = 1 - m), m1 > 0. Returns K(m) and
// s_tail = sum_{n>=1} 2^{n-1} c_n^2, from which
//   E(m) = K (1 - m/2 - s_tail).
// c_1 is formed as m / (2 (1 + sqrt(m1))) and subsequent c_n through
// c_{n+1} = c_n^2 / (4 a_{n+1}), both free of cancellation.
AgmSums agm_sums(double m, double m1) {
  double a = 1.0, b = std::sqrt(m1);
  double c = m / (2.0 * (1.0 + b));
  double s_tail = 0.0, pow2 = 1.0;
  for (int n = 0; n < 64; ++n) {
    s_tail += pow2 * c * c;
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = c * c / (2.0 * (an + bn));  // c_{k+1} = c_k^2 / (4 a_{k+1})
    a = an;
    b = bn;
    pow2 *= 2.0;
    if (pow2 * c * c < 1e-40) break;
  }
  a = 0.5 * (a + b);
  return {kPi / (2.0 * a), s_tail};
}

}  // namespace detail

std::pair<double, double> elliptic_ke_complement(double m1) {
  if (!(m1 > 0.0))
    throw std::domain_error("elliptic_ke: K singular at m = 1");
  if (m1 >= 1.0) {
    // m <= 0: only m = 0 is in the domain.
    return {0.5 * kPi, 0.5 * kPi};
  }
  const double m = 1.0 - m1;
  auto [K, s_tail] = detail::agm_sums(m, m1);
  double E;
  if (m <= 0.5) {
    E = K * (1.0 - 0.5 * m - s_tail);
  } else {
    // Legendre relation with the complementary modulus: all terms are
    // positive, so E stays accurate as m -> 1.
    auto [Kc, sc_tail] = detail::agm_sums(m1, m);
    double Sc = 0.5 * m1 + sc_tail;  // (K' - E') / K'
    E = (0.5 * kPi + K * Kc * Sc) / Kc;
  }
  return {K, E};
}

std::pair<double, double> elliptic_ke(double m) {
  if (m < 0.0) throw std::domain_error("elliptic_ke: m must be in [0,1]");
  if (m == 1.0) {
    return {std::numeric_limits<double>::infinity(), 1.0};
  }
  if (m > 1.0) throw std::domain_error("elliptic_ke: m must be in [0,1]");
  if (m == 0.0) return {0.5 * kPi, 0.5 * kPi};
  return elliptic_ke_complement(1.0 - m);
}

}  // namespace drop
