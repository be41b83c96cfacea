#pragma once

#include <string>
#include <vector>

#include "drop/drop_operator.hpp"

namespace drop {

struct SolverConfig {
  int lmax = 16;
  int grid_order = 96;
  double newton_tol = 1e-10;
  int max_newton_iters = 25;
  double fd_step = 1e-5;
  double s_start = -0.15;
  double s_end = 0.15;
  double ds = 0.01;
  std::string output_path;
  /// |s| beyond this is allowed but flagged experimental in the output.
  double validated_window = 0.15;
};

/// Throws std::invalid_argument on lmax < 8 / odd lmax, non-positive
/// tolerance, zero ds, or grid order < 2*lmax.
void validate(const SolverConfig& cfg);

/// One continuation state. chi keeps the amplitude normalization
/// chi[2] = s exactly (the degree-2 coefficient is pinned, never solved).
struct BranchPoint {
  double s = 0.0;
  double R = 0.0;
  ModeVector chi;
  EnergyReport energy;
  double rho = 0.0;              // radius of the equal-volume ball
  double lambda_near_zero = 0.0;
  double energy_excess = 0.0;
  double bw_x = 0.0, bw_f = 0.0;
  double mu_mean_f = 0.0;        // quadrature mean of F over the grid
  double f_sup_variation = 0.0;  // max F - min F over the grid
  int newton_iters = 0;
  double final_residual = 0.0;
};

struct FitValue {
  double value = 0.0;
  double fit_residual = 0.0;  // RMS misfit of the underlying fit
};

struct AsymptoticsFit {
  FitValue slope_R;        // dR/ds at 0, expected -1/7
  FitValue slope_vol;      // expected -(30/7)/R_*
  FitValue slope_lambda;   // expected -(12/7)/R_*
  FitValue cubic_energy;   // s^3 coefficient, expected (8 pi/35)/R_*
  FitValue c4_quadratic;   // expected (216/595)/R_*
  FitValue c0_quadratic;   // expected -(2/15)/R_*
  FitValue bw_ratio;       // f/(1-x)^3 as s->0, expected 98/135
};

struct BranchResult {
  std::vector<BranchPoint> points;
  bool complete = false;
  std::string diagnostic;  // set when the trace aborted mid-branch
};

/// Second-order branch predictor: R = R_* - s/7,
/// chi = s P_2 + s^2 (q4 P_4 + q0).
void initial_guess(double s, double& R, ModeVector& chi, int lmax);

/// Solves F(R + chi) = F(R) with c_2 pinned to s; unknowns are R and the
/// remaining even coefficients. Throws std::runtime_error with an
/// iteration trace on divergence. s = 0 returns the trivial point
/// (R_*, 0) by convention.
BranchPoint newton_solve(const DropletOperator& op, double s, double guess_R,
                         const ModeVector& guess_chi, const SolverConfig& cfg);

/// Marches s from s_start to s_end, warm-starting each solve from the
/// previous point plus the asymptotic increment. Aborts cleanly on the
/// first divergence and returns the partial branch.
BranchResult trace_branch(const DropletOperator& op, const SolverConfig& cfg);

/// I[Omega] - I[B_rho] for the equal-volume ball.
double energy_excess(const BranchPoint& point);

/// Bohr-Wheeler coordinates x = (4 pi / 30) rho^3, f = excess / Per(B_rho).
void bohr_wheeler_coords(const BranchPoint& point, double& x, double& f);

/// Odd/even polynomial fits in s; requires >= 7 points spanning both
/// signs of s (throws std::invalid_argument otherwise).
AsymptoticsFit fit_asymptotics(const std::vector<BranchPoint>& branch);

/// CSV serialization, header
/// s,R,rho,volume,perimeter,coulomb,total_energy,mu_virial,mu_mean_F,
/// lambda,energy_excess,bw_x,bw_f,newton_iters,residual,c0,c2,...,c{lmax}
/// with floats at 17 significant digits.
std::string branch_to_csv(const std::vector<BranchPoint>& points, int lmax);

/// Smallest-magnitude eigenvalue of the linearization at (R, chi),
/// symmetrized against the Legendre Gram matrix diag(4 pi / (2l + 1)).
double near_zero_eigenvalue(const DropletOperator& op, double R,
                            const ModeVector& chi, double fd_step);

}  // namespace drop
