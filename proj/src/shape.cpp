#include "drop/shape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace drop {

namespace {
constexpr double kPi = std::numbers::pi;
}

Shape make_shape(double R, std::vector<double> even_coeffs) {
  if (!(R > 0.0)) throw std::domain_error("make_shape: base radius must be positive");
  Shape s;
  s.base_radius = R;
  s.coeffs = std::move(even_coeffs);
  const int lmax = s.lmax();
  const int nsample = std::max(64, 4 * std::max(lmax, 1));
  for (int i = 0; i <= nsample; ++i) {
    double t = -1.0 + 2.0 * i / nsample;
    double phi, phi_t, phi_tt;
    eval_radius(s, t, phi, phi_t, phi_tt);
    if (!(phi > 0.0))
      throw std::domain_error("make_shape: profile is not positive (degenerate shape)");
  }
  return s;
}

void eval_radius(const Shape& shape, double t, double& phi, double& phi_t,
                 double& phi_tt) {
  phi = shape.base_radius;
  phi_t = 0.0;
  phi_tt = 0.0;
  if (shape.coeffs.empty()) return;
  const int lmax = shape.lmax();
  static thread_local std::vector<double> p, dp, ddp;
  legendre_eval(lmax, t, p, dp, ddp);
  for (size_t k = 0; k < shape.coeffs.size(); ++k) {
    const double c = shape.coeffs[k];
    if (c == 0.0) continue;
    phi += c * p[2 * k];
    phi_t += c * dp[2 * k];
    phi_tt += c * ddp[2 * k];
  }
}

GridField sample_radius(const Shape& shape, const GaussGrid& grid) {
  GridField f;
  f.values.resize(grid.order);
  for (int i = 0; i < grid.order; ++i) {
    double phi, phi_t, phi_tt;
    eval_radius(shape, grid.nodes[i], phi, phi_t, phi_tt);
    f.values[i] = phi;
  }
  return f;
}

double volume(const Shape& shape, const GaussGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    double phi, phi_t, phi_tt;
    eval_radius(shape, grid.nodes[i], phi, phi_t, phi_tt);
    acc += grid.weights[i] * phi * phi * phi;
  }
  return 2.0 * kPi / 3.0 * acc;
}

double perimeter(const Shape& shape, const GaussGrid& grid) {
  double acc = 0.0;
  for (int i = 0; i < grid.order; ++i) {
    const double t = grid.nodes[i];
    double phi, phi_t, phi_tt;
    eval_radius(shape, t, phi, phi_t, phi_tt);
    // |grad phi|^2 on S^2 = (1 - t^2) phi_t^2 for axisymmetric phi
    acc += grid.weights[i] * phi *
           std::sqrt(phi * phi + (1.0 - t * t) * phi_t * phi_t);
  }
  return 2.0 * kPi * acc;
}

EnergyReport ball_reference(double R) {
  if (!(R > 0.0)) throw std::domain_error("ball_reference: R must be positive");
  EnergyReport r;
  r.volume = 4.0 * kPi / 3.0 * R * R * R;
  r.perimeter = 4.0 * kPi * R * R;
  r.coulomb = 16.0 * kPi * kPi / 15.0 * std::pow(R, 5);
  r.total = r.perimeter + r.coulomb;
  r.mu_virial = 2.0 / R + 4.0 * kPi / 3.0 * R * R;
  return r;
}

std::string shape_to_text(const Shape& shape) {
  std::ostringstream os;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", shape.base_radius);
  os << "R = " << buf << "\n";
  os << "lmax = " << shape.lmax() << "\n";
  for (size_t k = 0; k < shape.coeffs.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", shape.coeffs[k]);
    os << "c" << 2 * k << " = " << buf << "\n";
  }
  return os.str();
}

Shape shape_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  double R = 0.0;
  int lmax = -1;
  std::vector<double> coeffs;
  bool have_r = false;
  while (std::getline(is, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    if (key.empty() || key[0] == '#') continue;
    const double val = std::stod(line.substr(eq + 1));
    if (key == "R") {
      R = val;
      have_r = true;
    } else if (key == "lmax") {
      lmax = int(val);
      if (lmax % 2 != 0) throw std::invalid_argument("shape_from_text: odd lmax");
      coeffs.assign(lmax / 2 + 1, 0.0);
    } else if (key[0] == 'c') {
      const int l = std::stoi(key.substr(1));
      if (l % 2 != 0) throw std::invalid_argument("shape_from_text: odd degree " + key);
      if (l / 2 >= int(coeffs.size())) coeffs.resize(l / 2 + 1, 0.0);
      coeffs[l / 2] = val;
    } else {
      throw std::invalid_argument("shape_from_text: unknown key " + key);
    }
  }
  if (!have_r) throw std::invalid_argument("shape_from_text: missing R");
  return make_shape(R, std::move(coeffs));
}

}  // namespace drop
