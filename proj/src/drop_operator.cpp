#include "drop/drop_operator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace drop {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace constants {

double r_star() { return std::cbrt(30.0 / (4.0 * kPi)); }

double a_critical() {
  const double c = std::cbrt(4.0);  // 2^{2/3}
  return 5.0 * (2.0 - c) / (c - 1.0);
}

double q4() { return (216.0 / 595.0) / r_star(); }

double q0() { return -(2.0 / 15.0) / r_star(); }

}  // namespace constants

double analytic_eigenvalue(int l, double R) {
  return l * (l + 1) - 2.0 -
         4.0 * kPi / 3.0 * R * R * R * (1.0 - 3.0 / (2 * l + 1));
}

DropletOperator::DropletOperator(int lmax, int grid_order)
    : lmax_(lmax),
      grid_(gauss_legendre(grid_order)),
      table_(legendre_table(lmax, grid_)) {}

Shape DropletOperator::shape_of(double R, const ModeVector& chi) const {
  return make_shape(R, chi);
}

GridField DropletOperator::local_operator(const Shape& shape) const {
  GridField out;
  out.values.resize(grid_.order);
  for (int i = 0; i < grid_.order; ++i) {
    const double t = grid_.nodes[i];
    double phi, phi_t, phi_tt;
    eval_radius(shape, t, phi, phi_t, phi_tt);
    const double omt2 = 1.0 - t * t;
    const double w = phi * phi + omt2 * phi_t * phi_t;
    const double sw = std::sqrt(w);
    // -div(grad phi / (phi sqrt(W))) = -d/dt [ (1-t^2) phi_t / (phi sqrt(W)) ]
    const double u = omt2 * phi_t;
    const double du = -2.0 * t * phi_t + omt2 * phi_tt;
    const double dw =
        2.0 * (phi * phi_t - t * phi_t * phi_t + omt2 * phi_t * phi_tt);
    const double v = phi * sw;
    const double dv = phi_t * sw + phi * dw / (2.0 * sw);
    out.values[i] =
        -(du * v - u * dv) / (v * v) + 3.0 / sw - sw / (phi * phi);
  }
  return out;
}

GridField DropletOperator::full_operator(const Shape& shape) const {
  GridField f = local_operator(shape);
  const GridField v = surface_potential(shape, grid_);
  for (int i = 0; i < grid_.order; ++i) f.values[i] += v.values[i];
  return f;
}

GridField DropletOperator::ball_operator(double R) const {
  if (cached_ball_r_ != R) {
    cached_ball_field_ = full_operator(Shape{R, {}});
    cached_ball_r_ = R;
  }
  return cached_ball_field_;
}

ModeVector DropletOperator::residual(double R, const ModeVector& chi) const {
  const GridField f = full_operator(shape_of(R, chi));
  const GridField f0 = ball_operator(R);
  std::vector<double> field(grid_.order);
  for (int i = 0; i < grid_.order; ++i)
    field[i] = R * R * (f.values[i] - f0.values[i]);
  return project(field, grid_, table_);
}

double DropletOperator::mu_virial(const Shape& shape) const {
  const double vol = volume(shape, grid_);
  const double per = perimeter(shape, grid_);
  const double d = coulomb_energy(shape, grid_);
  return (2.0 / 3.0 * per + 5.0 / 3.0 * d) / vol;
}

std::vector<ModeVector> DropletOperator::linearization_matrix(
    double R, const ModeVector& chi, double fd_step, bool check_step,
    double step_check_tol) const {
  const int nm = n_modes();
  ModeVector base = chi;
  base.resize(nm, 0.0);

  auto assemble = [&](double h) {
    std::vector<ModeVector> cols(nm);
    for (int j = 0; j < nm; ++j) {
      ModeVector plus = base, minus = base;
      plus[j] += h;
      minus[j] -= h;
      const ModeVector rp = residual(R, plus);
      const ModeVector rm = residual(R, minus);
      cols[j].resize(nm);
      for (int i = 0; i < nm; ++i) cols[j][i] = (rp[i] - rm[i]) / (2.0 * h);
    }
    return cols;
  };

  std::vector<ModeVector> m = assemble(fd_step);
  if (check_step) {
    const std::vector<ModeVector> m2 = assemble(2.0 * fd_step);
    double worst = 0.0;
    int wi = 0, wj = 0;
    for (int j = 0; j < nm; ++j)
      for (int i = 0; i < nm; ++i) {
        const double d = std::abs(m[j][i] - m2[j][i]);
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    if (worst > step_check_tol) {
      std::ostringstream os;
      os << "linearization_matrix: step-halving disagreement " << worst
         << " at entry (" << 2 * wi << "," << 2 * wj << "), fd_step "
         << fd_step;
      throw std::runtime_error(os.str());
    }
  }
  // rows i, columns j: m[j] is column j above; transpose into row-major
  std::vector<ModeVector> mat(nm, ModeVector(nm));
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j) mat[i][j] = m[j][i];
  return mat;
}

GridField DropletOperator::second_variation_pp(double R, double fd_step) const {
  auto second_diff = [&](double h) {
    ModeVector chi(n_modes(), 0.0);
    chi[1] = h;  // +h P_2
    const GridField fp = full_operator(shape_of(R, chi));
    chi[1] = -h;
    const GridField fm = full_operator(shape_of(R, chi));
    const GridField f0 = ball_operator(R);
    std::vector<double> out(grid_.order);
    for (int i = 0; i < grid_.order; ++i)
      out[i] = R * R *
               (fp.values[i] + fm.values[i] - 2.0 * f0.values[i]) / (h * h);
    return out;
  };
  const std::vector<double> d1 = second_diff(fd_step);
  const std::vector<double> d2 = second_diff(0.5 * fd_step);
  GridField out;
  out.values.resize(grid_.order);
  for (int i = 0; i < grid_.order; ++i)
    out.values[i] = (4.0 * d2[i] - d1[i]) / 3.0;
  return out;
}

double DropletOperator::transversality_check(double fd_step_mode,
                                             double fd_step_radius) const {
  // degree-2 coefficient of L_R P by a mode-space central difference
  auto l_p_coeff = [&](double R) {
    ModeVector plus(n_modes(), 0.0), minus(n_modes(), 0.0);
    plus[1] = fd_step_mode;
    minus[1] = -fd_step_mode;
    const ModeVector rp = residual(R, plus);
    const ModeVector rm = residual(R, minus);
    return (rp[1] - rm[1]) / (2.0 * fd_step_mode);
  };
  const double rs = constants::r_star();
  return (l_p_coeff(rs + fd_step_radius) - l_p_coeff(rs - fd_step_radius)) /
         (2.0 * fd_step_radius);
}

}  // namespace drop
