#include "drop/coulomb.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drop {

namespace {

constexpr double kPi = std::numbers::pi;

struct Kahan {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Shared core of the kernel moments. With
//   a^2 = (rho-rho2)^2 + 4 rho rho2 sin^2((theta-theta2)/2)   (c - e)
//   b^2 = (rho-rho2)^2 + 4 rho rho2 sin^2((theta+theta2)/2)   (c + e)
// the azimuthal integrals reduce to complete elliptic integrals of
// parameter m = 1 - a^2/b^2 = 2e/b^2. Both a^2 and m are assembled from
// half-angle differences, so nothing cancels as theta -> theta2.
struct KernelGeom {
  double b;        // sqrt(c + e)
  double m, m1;    // elliptic parameter and complement
  detail::AgmSums agm;
};

KernelGeom kernel_geom(double rho, double theta, double rho2, double theta2) {
  const double dr = rho - rho2;
  const double sm = std::sin(0.5 * (theta - theta2));
  const double sp = std::sin(0.5 * (theta + theta2));
  const double rr4 = 4.0 * rho * rho2;
  const double a2 = dr * dr + rr4 * sm * sm;
  const double b2 = dr * dr + rr4 * sp * sp;
  if (!(a2 > 0.0))
    throw std::domain_error("azimuthal_moments: coincident source and target");
  KernelGeom g;
  g.b = std::sqrt(b2);
  g.m1 = a2 / b2;
  g.m = rr4 * std::sin(theta) * std::sin(theta2) / b2;
  g.agm = detail::agm_sums(g.m, g.m1);
  return g;
}

double elliptic_e_from(const KernelGeom& g) {
  if (g.m <= 0.5) return g.agm.K * (1.0 - 0.5 * g.m - g.agm.s_tail);
  auto [K, E] = elliptic_ke_complement(g.m1);
  (void)K;
  return E;
}

// Dyadically graded Gauss panels toward the singular point. The
// innermost 2^-48 of each side is dropped; with a log singularity that
// truncation is far below the quadrature target.
constexpr int kPanelDepth = 48;

const GaussGrid& panel_rule() {
  static const GaussGrid rule = gauss_legendre(16);
  return rule;
}

template <class F>
void panels_one_side(F&& f, double from, double to, Kahan& acc) {
  // integrates over [from, to) graded toward `to` (or (to, from] if
  // from > to), outermost panel first
  const GaussGrid& rule = panel_rule();
  const double len = to - from;
  if (len == 0.0) return;
  double outer = from;
  double frac = 0.5;
  for (int k = 0; k < kPanelDepth; ++k) {
    const double inner = to - len * frac;
    if (inner == outer || inner == to) break;  // grading lost to roundoff
    const double mid = 0.5 * (outer + inner);
    const double half = 0.5 * (inner - outer);
    for (int q = 0; q < rule.order; ++q) {
      const double x = mid + half * rule.nodes[q];
      if (x == to) continue;  // rounded onto the singularity
      acc.add(half * rule.weights[q] * f(x));
    }
    outer = inner;
    frac *= 0.5;
  }
}

template <class F>
double integrate_log_singular(F&& f, double lo, double hi, double sing) {
  Kahan left, right;
  panels_one_side(f, lo, sing, left);   // + int_lo^sing
  panels_one_side(f, hi, sing, right);  // - int_sing^hi (descending)
  return left.sum - right.sum;
}

struct CurvePoint {
  double theta, t, s;           // polar angle, cos, sin
  double phi, phi_t;            // profile and d(phi)/dt
};

CurvePoint curve_point(const Shape& shape, double theta) {
  CurvePoint p;
  p.theta = theta;
  p.t = std::cos(theta);
  p.s = std::sin(theta);
  double phi_tt;
  eval_radius(shape, p.t, p.phi, p.phi_t, phi_tt);
  return p;
}

// Integrand of the surface form of the volume potential, reduced over
// the azimuth: the numerator (phi' w' - grad phi').(phi' w' - phi w)
// splits into A + B cos(psi) with
//   A = phi'^2 - phi phi' t t' + phi s'^2 t phi_t'
//   B = -phi s s' (phi' + t' phi_t')
// so V(target) = 1/2 int_0^pi phi' (A i0 + B i1) sin(theta') dtheta'.
double potential_integrand(const Shape& shape, const CurvePoint& tgt,
                           double theta2) {
  const CurvePoint src = curve_point(shape, theta2);
  const KernelGeom g = kernel_geom(tgt.phi, tgt.theta, src.phi, src.theta);
  const double i0 = 4.0 * g.agm.K / g.b;
  const double i1 = (g.m > 0.0) ? i0 * 2.0 * g.agm.s_tail / g.m : 0.0;
  const double A = src.phi * src.phi - tgt.phi * src.phi * tgt.t * src.t +
                   tgt.phi * src.s * src.s * tgt.t * src.phi_t;
  const double B =
      -tgt.phi * tgt.s * src.s * (src.phi + src.t * src.phi_t);
  return 0.5 * src.phi * (A * i0 + B * i1) * src.s;
}

}  // namespace

AzimuthalMoments azimuthal_moments(double rho, double theta, double rho2,
                                   double theta2) {
  if (!(rho > 0.0) || !(rho2 > 0.0))
    throw std::domain_error("azimuthal_moments: radii must be positive");
  const KernelGeom g = kernel_geom(rho, theta, rho2, theta2);
  AzimuthalMoments m;
  m.i0 = 4.0 * g.agm.K / g.b;
  m.i1 = (g.m > 0.0) ? m.i0 * 2.0 * g.agm.s_tail / g.m : 0.0;
  return m;
}

DistanceMoments distance_moments(double rho, double theta, double rho2,
                                 double theta2) {
  const KernelGeom g = kernel_geom(rho, theta, rho2, theta2);
  const double E = elliptic_e_from(g);
  DistanceMoments m;
  m.j0 = 4.0 * g.b * E;
  if (g.m > 0.0) {
    const double tau = g.agm.s_tail / g.m;
    m.j1 = 4.0 * g.b / 3.0 * g.agm.K *
           (2.0 * tau - g.m * (0.5 + tau));
  }
  return m;
}

GridField surface_potential(const Shape& shape, const GaussGrid& grid) {
  GridField out;
  out.values.resize(grid.order);
  for (int i = 0; i < grid.order; ++i) {
    const CurvePoint tgt = curve_point(shape, std::acos(grid.nodes[i]));
    out.values[i] = integrate_log_singular(
        [&](double th2) { return potential_integrand(shape, tgt, th2); }, 0.0,
        kPi, tgt.theta);
  }
  return out;
}

double coulomb_energy(const Shape& shape, const GaussGrid& grid,
                      const GridField& potential) {
  // virial identity: int_{S^2} phi^3 V domega = 5 D
  double acc = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    double phi, phi_t, phi_tt;
    eval_radius(shape, grid.nodes[i], phi, phi_t, phi_tt);
    acc += grid.weights[i] * phi * phi * phi * potential.values[i];
  }
  return 2.0 * kPi * acc / 5.0;
}

double coulomb_energy(const Shape& shape, const GaussGrid& grid) {
  return coulomb_energy(shape, grid, surface_potential(shape, grid));
}

double coulomb_energy_double_surface(const Shape& shape,
                                     const GaussGrid& grid) {
  // D = -(1/4) iint phi phi' (phi w - grad phi).(phi' w' - grad phi')
  //              |phi w - phi' w'| dw dw'
  // The vector dot product reduces over the azimuth to alpha + beta cos(psi),
  //   alpha = (phi t - s^2 phi_t)(phi' t' - s'^2 phi_t')
  //   beta  = s s' (phi + t phi_t)(phi' + t' phi_t')
  double acc = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    const CurvePoint a = curve_point(shape, std::acos(grid.nodes[i]));
    const double fa = a.phi * a.t - a.s * a.s * a.phi_t;
    const double ga = a.phi + a.t * a.phi_t;
    const double inner = integrate_log_singular(
        [&](double th2) {
          const CurvePoint b = curve_point(shape, th2);
          const DistanceMoments dm =
              distance_moments(a.phi, a.theta, b.phi, b.theta);
          const double alpha = fa * (b.phi * b.t - b.s * b.s * b.phi_t);
          const double beta = a.s * b.s * ga * (b.phi + b.t * b.phi_t);
          return a.phi * b.phi * (alpha * dm.j0 + beta * dm.j1) * b.s;
        },
        0.0, kPi, a.theta);
    acc += grid.weights[i] * inner;
  }
  return -0.5 * kPi * acc;
}

double virial_defect(const Shape& shape, const GaussGrid& grid) {
  const GridField v = surface_potential(shape, grid);
  double lhs = 0.0;  // int phi^3 V domega
  for (int i = 0; i < grid.order; ++i) {
    double phi, phi_t, phi_tt;
    eval_radius(shape, grid.nodes[i], phi, phi_t, phi_tt);
    lhs += grid.weights[i] * phi * phi * phi * v.values[i];
  }
  lhs *= 2.0 * kPi;
  const double five_d = 5.0 * coulomb_energy_double_surface(shape, grid);
  return std::abs(lhs - five_d) / five_d;
}

GridField sphere_kernel_apply(const std::vector<double>& even_coeffs,
                              const GaussGrid& grid) {
  const int lmax = even_coeffs.empty() ? 0 : 2 * (int(even_coeffs.size()) - 1);
  auto field_at = [&](double t) {
    static thread_local std::vector<double> p, dp, ddp;
    legendre_eval(std::max(lmax, 1), t, p, dp, ddp);
    double u = 0.0;
    for (size_t k = 0; k < even_coeffs.size(); ++k)
      u += even_coeffs[k] * p[2 * k];
    return u;
  };
  GridField out;
  out.values.resize(grid.order);
  for (int i = 0; i < grid.order; ++i) {
    const double theta = std::acos(grid.nodes[i]);
    out.values[i] = integrate_log_singular(
        [&](double th2) {
          const KernelGeom g = kernel_geom(1.0, theta, 1.0, th2);
          return field_at(std::cos(th2)) * 4.0 * g.agm.K / g.b *
                 std::sin(th2);
        },
        0.0, kPi, theta);
  }
  return out;
}

namespace {

// Closed-form inner radial integral int_0^a r'^2 dr' / sqrt(r'^2 - 2 b r' + rho^2)
// for a target at distance rho with b = rho cos(gamma). `one_m_cos` is
// 1 - cos(gamma) supplied in a cancellation-free form.
double radial_inner(double a, double rho, double one_m_cos) {
  const double b = rho * (1.0 - one_m_cos);
  const double q = std::sqrt(std::max(a * a - 2.0 * a * b + rho * rho, 0.0));
  const double coef = 0.5 * (3.0 * b * b - rho * rho);
  // a - b + q without cancellation when a < b
  const double sin2 = one_m_cos * (2.0 - one_m_cos);  // sin^2(gamma)
  const double log_upper = (a >= b)
                               ? std::log(a - b + q)
                               : std::log(rho * rho * sin2 / (q + b - a));
  const double upper = 0.5 * (a + 3.0 * b) * q + coef * log_upper;
  const double lower = 1.5 * b * rho + coef * std::log(rho * one_m_cos);
  return upper - lower;
}

}  // namespace

namespace {

// Dyadically graded panels toward `to`, as in panels_one_side but with a
// configurable panel rule and depth (the oracle wants a cheaper rule).
template <class F>
void oracle_panels(F&& f, double from, double to, const GaussGrid& rule,
                   int depth, Kahan& acc) {
  const double len = to - from;
  if (len == 0.0) return;
  double outer = from;
  double frac = 0.5;
  for (int k = 0; k < depth; ++k) {
    const double inner = to - len * frac;
    if (inner == outer || inner == to) break;
    const double mid = 0.5 * (outer + inner);
    const double half = 0.5 * (inner - outer);
    for (int q = 0; q < rule.order; ++q) {
      const double x = mid + half * rule.nodes[q];
      if (x == to) continue;
      acc.add(half * rule.weights[q] * f(x));
    }
    outer = inner;
    frac *= 0.5;
  }
}

}  // namespace

double coulomb_energy_oracle(const Shape& shape, int n_t, int depth,
                             int n_r) {
  const GaussGrid gt = gauss_legendre(n_t);
  const GaussGrid gr = gauss_legendre(n_r);
  const GaussGrid rule = gauss_legendre(8);

  // D = (1/2) 2pi int dt int dtheta' sin(theta') (2 int_0^pi dpsi)
  //     int_0^{phi(t)} r^2 radial_inner(phi(t'), r, 1 - cos gamma) dr.
  // The integrand is log-singular where omega' -> omega, i.e. at
  // (theta' = theta, psi = 0); both angular integrals are graded there.
  Kahan total;
  for (int i = 0; i < n_t; ++i) {
    const double theta = std::acos(gt.nodes[i]);
    const double si = std::sin(theta);
    double phi, d1, d2;
    eval_radius(shape, gt.nodes[i], phi, d1, d2);

    std::vector<double> rs(n_r), rw(n_r);
    for (int q = 0; q < n_r; ++q) {
      rs[q] = 0.5 * phi * (1.0 + gr.nodes[q]);
      rw[q] = 0.5 * phi * gr.weights[q] * rs[q] * rs[q];
    }

    auto theta2_integrand = [&](double theta2) {
      const double sj = std::sin(theta2);
      double phi2, e1, e2;
      eval_radius(shape, std::cos(theta2), phi2, e1, e2);
      const double dth = 0.5 * (theta - theta2);
      const double base = 2.0 * std::sin(dth) * std::sin(dth);
      auto psi_integrand = [&](double psi) {
        const double sh = std::sin(0.5 * psi);
        const double one_m_cos = base + 2.0 * si * sj * sh * sh;
        double rint = 0.0;
        for (int q = 0; q < n_r; ++q)
          rint += rw[q] * radial_inner(phi2, rs[q], one_m_cos);
        return rint;
      };
      Kahan psi_acc;
      oracle_panels(psi_integrand, kPi, 0.0, rule, depth, psi_acc);
      return -2.0 * sj * psi_acc.sum;  // descending orientation
    };

    Kahan inner;
    oracle_panels(theta2_integrand, 0.0, theta, rule, depth, inner);
    Kahan inner_hi;
    oracle_panels(theta2_integrand, kPi, theta, rule, depth, inner_hi);
    total.add(gt.weights[i] * (inner.sum - inner_hi.sum));
  }
  return 0.5 * 2.0 * kPi * total.sum;
}

}  // namespace drop
