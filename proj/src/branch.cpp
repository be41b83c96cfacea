#include "drop/branch.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace drop {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const ModeVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void fill_diagnostics(const DropletOperator& op, const SolverConfig& cfg,
                      BranchPoint& pt) {
  const Shape shape = op.shape_of(pt.R, pt.chi);
  const GaussGrid& grid = op.grid();
  const GridField v = surface_potential(shape, grid);

  pt.energy.volume = volume(shape, grid);
  pt.energy.perimeter = perimeter(shape, grid);
  pt.energy.coulomb = coulomb_energy(shape, grid, v);
  pt.energy.total = pt.energy.perimeter + pt.energy.coulomb;
  pt.energy.mu_virial =
      (2.0 / 3.0 * pt.energy.perimeter + 5.0 / 3.0 * pt.energy.coulomb) /
      pt.energy.volume;
  pt.rho = std::cbrt(3.0 * pt.energy.volume / (4.0 * kPi));

  const GridField fp = op.local_operator(shape);
  double fmin = 0.0, fmax = 0.0, fmean = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    const double f = fp.values[i] + v.values[i];
    if (i == 0 || f < fmin) fmin = f;
    if (i == 0 || f > fmax) fmax = f;
    fmean += grid.weights[i] * f;
  }
  pt.mu_mean_f = fmean / 2.0;
  pt.f_sup_variation = fmax - fmin;

  pt.energy_excess = energy_excess(pt);
  bohr_wheeler_coords(pt, pt.bw_x, pt.bw_f);
  pt.lambda_near_zero = near_zero_eigenvalue(op, pt.R, pt.chi, cfg.fd_step);
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (cfg.lmax < 8 || cfg.lmax % 2 != 0)
    throw std::invalid_argument("config: lmax must be even and >= 8");
  if (!(cfg.newton_tol > 0.0))
    throw std::invalid_argument("config: tolerance must be positive");
  if (cfg.ds == 0.0) throw std::invalid_argument("config: ds must be nonzero");
  if (cfg.grid_order < 2 * cfg.lmax)
    throw std::invalid_argument("config: grid order must be >= 2*lmax");
  if (!(cfg.fd_step > 0.0))
    throw std::invalid_argument("config: fd step must be positive");
}

void initial_guess(double s, double& R, ModeVector& chi, int lmax) {
  R = constants::r_star() - s / 7.0;
  chi.assign(lmax / 2 + 1, 0.0);
  chi[1] = s;
  chi[2] = s * s * constants::q4();
  chi[0] = s * s * constants::q0();
}

double near_zero_eigenvalue(const DropletOperator& op, double R,
                            const ModeVector& chi, double fd_step) {
  const int nm = op.n_modes();
  const auto mat = op.linearization_matrix(R, chi, fd_step);
  // Gram-symmetrized eigenproblem: A = G M with G_l = 4 pi/(2l+1) is the
  // matrix of <P_l, L P_l'> and is symmetric up to discretization error.
  Eigen::MatrixXd a(nm, nm);
  Eigen::VectorXd gsqrt(nm);
  for (int i = 0; i < nm; ++i) gsqrt(i) = std::sqrt(4.0 * kPi / (4 * i + 1));
  for (int i = 0; i < nm; ++i)
    for (int j = 0; j < nm; ++j)
      a(i, j) = gsqrt(i) * gsqrt(i) * mat[i][j];
  Eigen::MatrixXd sym =
      gsqrt.cwiseInverse().asDiagonal() * a * gsqrt.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  double best = es.eigenvalues()(0);
  for (int i = 1; i < nm; ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(best))
      best = es.eigenvalues()(i);
  return best;
}

BranchPoint newton_solve(const DropletOperator& op, double s, double guess_R,
                         const ModeVector& guess_chi, const SolverConfig& cfg) {
  const int nm = op.n_modes();

  BranchPoint pt;
  pt.s = s;

  if (s == 0.0) {
    // any ball solves the s = 0 system; the branch is centered at R_*
    pt.R = constants::r_star();
    pt.chi.assign(nm, 0.0);
    pt.newton_iters = 0;
    pt.final_residual = 0.0;
    fill_diagnostics(op, cfg, pt);
    return pt;
  }

  // unknowns u = [R, c0, c4, c6, ..., c_lmax]; c2 is pinned to s
  auto chi_of = [&](const Eigen::VectorXd& u) {
    ModeVector chi(nm, 0.0);
    chi[0] = u(1);
    chi[1] = s;
    for (int j = 2; j < nm; ++j) chi[j] = u(j);
    return chi;
  };
  auto resid_of = [&](const Eigen::VectorXd& u) {
    const ModeVector r = op.residual(u(0), chi_of(u));
    Eigen::VectorXd out(nm);
    for (int i = 0; i < nm; ++i) out(i) = r[i];
    return out;
  };

  Eigen::VectorXd u(nm);
  u(0) = guess_R;
  u(1) = guess_chi.size() > 0 ? guess_chi[0] : 0.0;
  for (int j = 2; j < nm; ++j)
    u(j) = size_t(j) < guess_chi.size() ? guess_chi[j] : 0.0;

  std::ostringstream trace;
  Eigen::VectorXd r = resid_of(u);
  double rnorm = r.norm();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool have_jacobian = false;

  int iter = 0;
  for (; iter < cfg.max_newton_iters; ++iter) {
    if (rnorm <= cfg.newton_tol) break;
    if (!have_jacobian) {
      const double h = cfg.fd_step * std::max(1.0, norm2(chi_of(u)));
      Eigen::MatrixXd jac(nm, nm);
      for (int j = 0; j < nm; ++j) {
        Eigen::VectorXd up = u, um = u;
        up(j) += h;
        um(j) -= h;
        jac.col(j) = (resid_of(up) - resid_of(um)) / (2.0 * h);
      }
      lu.compute(jac);
      have_jacobian = true;
    }
    const Eigen::VectorXd step = lu.solve(-r);
    double scale = 1.0;
    bool accepted = false;
    for (int back = 0; back < 8; ++back) {
      const Eigen::VectorXd cand = u + scale * step;
      try {
        const Eigen::VectorXd rc = resid_of(cand);
        const double cnorm = rc.norm();
        if (cnorm < rnorm || cnorm <= cfg.newton_tol) {
          u = cand;
          r = rc;
          rnorm = cnorm;
          accepted = true;
          break;
        }
      } catch (const std::domain_error&) {
        // degenerate candidate shape: shrink the step
      }
      scale *= 0.5;
    }
    trace << "iter " << iter << ": |r| = " << rnorm << ", step scale "
          << scale << "\n";
    if (!accepted) {
      if (have_jacobian && iter > 0) {
        have_jacobian = false;  // chord Jacobian went stale; rebuild
        continue;
      }
      throw std::runtime_error("newton_solve diverged at s = " +
                               std::to_string(s) + "\n" + trace.str());
    }
  }
  if (rnorm > cfg.newton_tol)
    throw std::runtime_error("newton_solve: no convergence after " +
                             std::to_string(iter) + " iterations at s = " +
                             std::to_string(s) + "\n" + trace.str());

  pt.R = u(0);
  pt.chi = chi_of(u);
  pt.newton_iters = iter;
  pt.final_residual = rnorm;
  fill_diagnostics(op, cfg, pt);
  return pt;
}

BranchResult trace_branch(const DropletOperator& op, const SolverConfig& cfg) {
  validate(cfg);
  BranchResult result;
  const double dir = (cfg.s_end >= cfg.s_start) ? std::abs(cfg.ds)
                                                : -std::abs(cfg.ds);
  const int nsteps =
      (cfg.s_end == cfg.s_start)
          ? 0
          : int(std::round((cfg.s_end - cfg.s_start) / dir));

  double prev_R = 0.0;
  ModeVector prev_chi;
  bool have_prev = false;

  for (int k = 0; k <= nsteps; ++k) {
    const double s = cfg.s_start + k * dir;
    double gr;
    ModeVector gchi;
    initial_guess(s, gr, gchi, cfg.lmax);
    if (have_prev) {
      // predictor: previous solution plus the asymptotic increment
      double gr_prev, gr_here;
      ModeVector gc_prev, gc_here;
      initial_guess(s - dir, gr_prev, gc_prev, cfg.lmax);
      initial_guess(s, gr_here, gc_here, cfg.lmax);
      gr = prev_R + (gr_here - gr_prev);
      gchi = prev_chi;
      for (size_t j = 0; j < gchi.size(); ++j)
        gchi[j] += gc_here[j] - gc_prev[j];
    }
    try {
      BranchPoint pt = newton_solve(op, s, gr, gchi, cfg);
      prev_R = pt.R;
      prev_chi = pt.chi;
      have_prev = true;
      result.points.push_back(std::move(pt));
    } catch (const std::exception& e) {
      result.diagnostic = e.what();
      return result;
    }
  }
  result.complete = true;
  return result;
}

double energy_excess(const BranchPoint& point) {
  const EnergyReport ball = ball_reference(point.rho);
  return (point.energy.perimeter - ball.perimeter) +
         (point.energy.coulomb - ball.coulomb);
}

void bohr_wheeler_coords(const BranchPoint& point, double& x, double& f) {
  x = 4.0 * kPi / 30.0 * point.rho * point.rho * point.rho;
  f = point.energy_excess / (4.0 * kPi * point.rho * point.rho);
}

namespace {

// least-squares fit of y against the given powers of s; returns
// coefficients plus the RMS misfit
std::pair<Eigen::VectorXd, double> polyfit(const std::vector<double>& svals,
                                           const std::vector<double>& yvals,
                                           const std::vector<int>& powers) {
  const int n = int(svals.size());
  const int p = int(powers.size());
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    y(i) = yvals[i];
    for (int j = 0; j < p; ++j) design(i, j) = std::pow(svals[i], powers[j]);
  }
  const Eigen::VectorXd coef =
      design.colPivHouseholderQr().solve(y);
  const double rms = (design * coef - y).norm() / std::sqrt(double(n));
  return {coef, rms};
}

}  // namespace

AsymptoticsFit fit_asymptotics(const std::vector<BranchPoint>& branch) {
  bool pos = false, neg = false;
  for (const auto& p : branch) {
    if (p.s > 0) pos = true;
    if (p.s < 0) neg = true;
  }
  if (branch.size() < 7 || !pos || !neg)
    throw std::invalid_argument(
        "fit_asymptotics: need >= 7 points spanning both signs of s");

  std::vector<double> s, r, vol, lam, exc, c4, c0;
  for (const auto& p : branch) {
    s.push_back(p.s);
    r.push_back(p.R);
    vol.push_back(p.energy.volume);
    lam.push_back(p.lambda_near_zero);
    exc.push_back(p.energy_excess);
    c4.push_back(p.chi.size() > 2 ? p.chi[2] : 0.0);
    c0.push_back(p.chi.empty() ? 0.0 : p.chi[0]);
  }

  AsymptoticsFit fit;
  {
    auto [c, rms] = polyfit(s, r, {0, 1, 2, 3});
    fit.slope_R = {c(1), rms};
  }
  {
    auto [c, rms] = polyfit(s, vol, {0, 1, 2, 3});
    fit.slope_vol = {c(1), rms};
  }
  {
    auto [c, rms] = polyfit(s, lam, {0, 1, 2, 3});
    fit.slope_lambda = {c(1), rms};
  }
  {
    auto [c, rms] = polyfit(s, exc, {2, 3, 4});
    fit.cubic_energy = {c(1), rms};
  }
  {
    auto [c, rms] = polyfit(s, c4, {2, 3, 4});
    fit.c4_quadratic = {c(0), rms};
  }
  {
    auto [c, rms] = polyfit(s, c0, {2, 3, 4});
    fit.c0_quadratic = {c(0), rms};
  }
  {
    std::vector<double> sr, ratio;
    for (const auto& p : branch) {
      if (p.s == 0.0) continue;
      const double om = 1.0 - p.bw_x;
      sr.push_back(p.s);
      ratio.push_back(p.bw_f / (om * om * om));
    }
    auto [c, rms] = polyfit(sr, ratio, {0, 1, 2});
    fit.bw_ratio = {c(0), rms};
  }
  return fit;
}

std::string branch_to_csv(const std::vector<BranchPoint>& points, int lmax) {
  std::ostringstream os;
  os << "s,R,rho,volume,perimeter,coulomb,total_energy,mu_virial,mu_mean_F,"
        "lambda,energy_excess,bw_x,bw_f,newton_iters,residual";
  for (int l = 0; l <= lmax; l += 2) os << ",c" << l;
  os << "\n";
  char buf[40];
  auto put = [&](double x, bool lead_comma = true) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (lead_comma) os << ',';
    os << buf;
  };
  for (const auto& p : points) {
    put(p.s, false);
    put(p.R);
    put(p.rho);
    put(p.energy.volume);
    put(p.energy.perimeter);
    put(p.energy.coulomb);
    put(p.energy.total);
    put(p.energy.mu_virial);
    put(p.mu_mean_f);
    put(p.lambda_near_zero);
    put(p.energy_excess);
    put(p.bw_x);
    put(p.bw_f);
    os << ',' << p.newton_iters;
    put(p.final_residual);
    for (int k = 0; k <= lmax / 2; ++k)
      put(size_t(k) < p.chi.size() ? p.chi[k] : 0.0);
    os << "\n";
  }
  return os.str();
}

}  // namespace drop
