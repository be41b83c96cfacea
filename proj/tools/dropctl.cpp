// dropctl: batch front end for the droplet equilibrium solver.
//
// Subcommands: ball, spectrum, branch, verify, eval. Every run writes a
// JSON manifest next to its output recording the effective configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drop/branch.hpp"
#include "drop/verify.hpp"

namespace {

constexpr const char* kVersion = "dropctl 1.0.0";

struct Options {
  int lmax = 16;
  int grid = 96;
  double tol = 1e-10;
  double s_start = -0.15;
  double s_end = 0.15;
  double ds = 0.01;
  std::string out;
  int threads = 1;
  double r = 1.0;
  std::string shape_path;
  std::string only;
  double tol_scale = 1.0;
};

nlohmann::json config_echo(const std::string& command, const Options& o) {
  nlohmann::json cfg{{"lmax", o.lmax},   {"grid", o.grid},
                     {"tol", o.tol},     {"threads", o.threads},
                     {"out", o.out}};
  if (command == "branch") {
    cfg["s_start"] = o.s_start;
    cfg["s_end"] = o.s_end;
    cfg["ds"] = o.ds;
  }
  if (command == "ball" || command == "spectrum") cfg["r"] = o.r;
  if (command == "eval") cfg["shape"] = o.shape_path;
  if (command == "verify") {
    cfg["only"] = o.only;
    cfg["tol_scale"] = o.tol_scale;
  }
  return cfg;
}

void write_manifest(const std::string& command, const Options& o,
                    double wall_seconds,
                    const std::vector<std::string>& outputs) {
  nlohmann::json manifest{{"command", command},
                          {"config", config_echo(command, o)},
                          {"version", kVersion},
                          {"wall_time_seconds", wall_seconds},
                          {"outputs", outputs}};
  const std::string path =
      (o.out.empty() ? command : o.out) + ".manifest.json";
  std::ofstream f(path);
  f << manifest.dump(2) << "\n";
}

void print_report(const char* label, const drop::EnergyReport& rep) {
  std::printf("%s\n", label);
  std::printf("  volume      %.17g\n", rep.volume);
  std::printf("  perimeter   %.17g\n", rep.perimeter);
  std::printf("  coulomb     %.17g\n", rep.coulomb);
  std::printf("  total       %.17g\n", rep.total);
  std::printf("  mu_virial   %.17g\n", rep.mu_virial);
}

int cmd_ball(const Options& o) {
  const drop::EnergyReport exact = drop::ball_reference(o.r);
  const drop::Shape ball = drop::make_shape(o.r, {});
  const drop::GaussGrid grid = drop::gauss_legendre(o.grid);
  drop::EnergyReport quad;
  quad.volume = drop::volume(ball, grid);
  quad.perimeter = drop::perimeter(ball, grid);
  quad.coulomb = drop::coulomb_energy(ball, grid);
  quad.total = quad.perimeter + quad.coulomb;
  quad.mu_virial =
      (2.0 / 3.0 * quad.perimeter + 5.0 / 3.0 * quad.coulomb) / quad.volume;
  print_report("closed form", exact);
  print_report("quadrature", quad);
  const double disc = std::max(
      {std::abs(quad.volume / exact.volume - 1.0),
       std::abs(quad.perimeter / exact.perimeter - 1.0),
       std::abs(quad.coulomb / exact.coulomb - 1.0)});
  std::printf("max relative discrepancy %.3e\n", disc);
  return 0;
}

int cmd_spectrum(const Options& o) {
  drop::DropletOperator op(o.lmax, o.grid);
  const drop::ModeVector zero(op.n_modes(), 0.0);
  const auto mat = op.linearization_matrix(o.r, zero, 1e-5);
  std::ostringstream csv;
  csv << "l,analytic,numeric,abs_diff\n";
  for (int k = 0; k < op.n_modes(); ++k) {
    const double analytic = drop::analytic_eigenvalue(2 * k, o.r);
    char line[128];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", 2 * k,
                  analytic, mat[k][k], std::abs(mat[k][k] - analytic));
    csv << line;
  }
  if (o.out.empty()) {
    std::printf("%s", csv.str().c_str());
  } else {
    std::ofstream f(o.out);
    f << csv.str();
  }
  return 0;
}

int cmd_branch(const Options& o) {
  drop::SolverConfig cfg;
  cfg.lmax = o.lmax;
  cfg.grid_order = o.grid;
  cfg.newton_tol = o.tol;
  cfg.s_start = o.s_start;
  cfg.s_end = o.s_end;
  cfg.ds = o.ds;
  cfg.output_path = o.out;
  drop::validate(cfg);
  if (std::max(std::abs(cfg.s_start), std::abs(cfg.s_end)) >
      cfg.validated_window)
    std::fprintf(stderr,
                 "warning: window exceeds |s| = %g; results are "
                 "experimental\n",
                 cfg.validated_window);
  drop::DropletOperator op(cfg.lmax, cfg.grid_order);
  const drop::BranchResult result = drop::trace_branch(op, cfg);
  const std::string csv = drop::branch_to_csv(result.points, cfg.lmax);
  if (o.out.empty()) {
    std::printf("%s", csv.c_str());
  } else {
    std::ofstream f(o.out);
    f << csv;
  }
  if (!result.complete) {
    std::fprintf(stderr, "branch trace incomplete: %s\n",
                 result.diagnostic.c_str());
    return 1;
  }
  return 0;
}

int cmd_verify(const Options& o) {
  drop::VerifyOptions vo;
  vo.lmax = o.lmax;
  vo.grid_order = o.grid;
  vo.tol_scale = o.tol_scale;
  vo.only = o.only;
  const auto results = drop::run_verification(vo);
  std::printf("%s", drop::format_results(results).c_str());
  return drop::all_passed(results) ? 0 : 1;
}

int cmd_eval(const Options& o) {
  std::ifstream f(o.shape_path);
  if (!f) {
    std::fprintf(stderr, "cannot open shape file %s\n", o.shape_path.c_str());
    return 2;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  const drop::Shape shape = drop::shape_from_text(buf.str());
  const drop::GaussGrid grid = drop::gauss_legendre(o.grid);
  drop::EnergyReport rep;
  rep.volume = drop::volume(shape, grid);
  rep.perimeter = drop::perimeter(shape, grid);
  rep.coulomb = drop::coulomb_energy(shape, grid);
  rep.total = rep.perimeter + rep.coulomb;
  rep.mu_virial =
      (2.0 / 3.0 * rep.perimeter + 5.0 / 3.0 * rep.coulomb) / rep.volume;
  print_report(o.shape_path.c_str(), rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Axisymmetric liquid-drop equilibrium solver"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config");
  app.fallthrough();
  app.require_subcommand(1);

  Options o;
  app.add_option("--lmax", o.lmax, "highest even Legendre degree");
  app.add_option("--grid", o.grid, "Gauss quadrature order");
  app.add_option("--tol", o.tol, "Newton residual tolerance");
  app.add_option("--s-start", o.s_start, "first branch parameter value");
  app.add_option("--s-end", o.s_end, "last branch parameter value");
  app.add_option("--ds", o.ds, "branch parameter step");
  app.add_option("--out", o.out, "output file path");
  app.add_option("--threads", o.threads, "worker threads (results are "
                                         "independent of this)");

  CLI::App* ball = app.add_subcommand("ball", "closed form vs quadrature "
                                              "for a ball");
  ball->add_option("--r", o.r, "ball radius")
      ->required()
      ->check(CLI::PositiveNumber);

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "linearization spectrum at a ball");
  spectrum->add_option("--r", o.r, "base radius")
      ->required()
      ->check(CLI::PositiveNumber);

  app.add_subcommand("branch", "trace the bifurcating branch");

  CLI::App* verify = app.add_subcommand("verify", "run acceptance checks");
  verify->add_option("--only", o.only, "substring filter on check names");
  verify->add_option("--tol-scale", o.tol_scale,
                     "scale factor on every tolerance");

  CLI::App* eval = app.add_subcommand("eval", "energy report for a shape "
                                              "file");
  eval->add_option("--shape", o.shape_path, "shape file (key = value text)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto t0 = std::chrono::steady_clock::now();
  int rc;
  try {
    if (command == "ball") rc = cmd_ball(o);
    else if (command == "spectrum") rc = cmd_spectrum(o);
    else if (command == "branch") rc = cmd_branch(o);
    else if (command == "verify") rc = cmd_verify(o);
    else rc = cmd_eval(o);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::vector<std::string> outputs;
  if (!o.out.empty()) outputs.push_back(o.out);
  write_manifest(command, o, wall, outputs);
  return rc;
}
