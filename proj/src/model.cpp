#include "fanocav/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fanocav {

namespace {

void require_finite(double v, const char* fn, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << fn << "(): " << name << " must be finite, got " << v;
    throw std::invalid_argument(msg.str());
  }
}

void require_positive(double v, const char* fn, const char* name) {
  require_finite(v, fn, name);
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << fn << "(): " << name << " must be positive, got " << v;
    throw std::invalid_argument(msg.str());
  }
}

void require_nonnegative(double v, const char* fn, const char* name) {
  require_finite(v, fn, name);
  if (v < 0.0) {
    std::ostringstream msg;
    msg << fn << "(): " << name << " must be nonnegative, got " << v;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

void PhysicalSetup::validate() const {
  require_positive(zeta0, "PhysicalSetup::validate", "zeta0");
  // zeta_r = 0 means a transparent right mirror (single-mirror limit);
  // +inf means a perfectly reflecting one, i.e. a one-sided cavity.
  if (std::isnan(zeta_r) || zeta_r < 0.0)
    throw std::invalid_argument("PhysicalSetup::validate(): zeta_r must be >= 0 (or +inf)");
  require_positive(fsr, "PhysicalSetup::validate", "fsr");
  require_positive(gamma, "PhysicalSetup::validate", "gamma");
  require_finite(omega_d, "PhysicalSetup::validate", "omega_d");
  if (s != 1 && s != -1)
    throw std::invalid_argument("PhysicalSetup::validate(): s must be +1 or -1");
}

void CoupledModeParams::validate() const {
  require_finite(omega_a, "CoupledModeParams::validate", "omega_a");
  require_finite(omega_d, "CoupledModeParams::validate", "omega_d");
  require_finite(lambda, "CoupledModeParams::validate", "lambda");
  require_finite(phi, "CoupledModeParams::validate", "phi");
  require_nonnegative(kappa_l, "CoupledModeParams::validate", "kappa_l");
  require_nonnegative(kappa_r, "CoupledModeParams::validate", "kappa_r");
  require_nonnegative(kappa_0, "CoupledModeParams::validate", "kappa_0");
  require_nonnegative(gamma, "CoupledModeParams::validate", "gamma");
}

void ComplexSpectrum::validate() const {
  if (grid.size() != values.size())
    throw std::invalid_argument("ComplexSpectrum::validate(): grid/values length mismatch");
  for (Eigen::Index i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("ComplexSpectrum::validate(): grid must be strictly increasing");
}

void OptomechParams::validate() const {
  require_positive(omega_m, "OptomechParams::validate", "omega_m");
  require_positive(gamma_m, "OptomechParams::validate", "gamma_m");
  require_nonnegative(nbar, "OptomechParams::validate", "nbar");
  require_nonnegative(g, "OptomechParams::validate", "g");
  require_finite(delta_a, "OptomechParams::validate", "delta_a");
  require_finite(delta_d, "OptomechParams::validate", "delta_d");
}

CoupledModeParams identify_parameters(const PhysicalSetup& setup) {
  setup.validate();
  if (!setup.one_sided() && !(setup.zeta_r > 0.0))
    throw std::invalid_argument(
        "identify_parameters(): zeta_r must be positive or +inf (one-sided)");

  CoupledModeParams p;
  p.kappa_l = 2.0 * setup.fsr;
  p.kappa_0 = setup.fsr / (2.0 * setup.zeta0 * setup.zeta0);
  p.kappa_r = setup.one_sided() ? 0.0 : setup.fsr / (2.0 * setup.zeta_r * setup.zeta_r);
  p.gamma = setup.gamma;
  p.omega_d = setup.omega_d;
  p.lambda = -setup.s * std::sqrt(p.kappa_0 * setup.gamma);
  p.phi = 0.0;
  p.omega_a = setup.omega_d - 2.0 * setup.s * std::sqrt(p.kappa_0 * p.kappa_l);
  return p;
}

std::pair<std::complex<double>, std::complex<double>> coupling_g(const CoupledModeParams& p) {
  p.validate();
  const std::complex<double> i(0.0, 1.0);
  const double root = std::sqrt(p.kappa_l * p.gamma);
  return {i * p.lambda * std::exp(i * p.phi) + root, i * p.lambda * std::exp(-i * p.phi) + root};
}

CoupledModeParams rotating_frame(const CoupledModeParams& p, double omega_ref) {
  if (!std::isfinite(omega_ref))
    throw std::invalid_argument("rotating_frame(): omega_ref must be finite");
  CoupledModeParams out = p;
  out.omega_a -= omega_ref;
  out.omega_d -= omega_ref;
  return out;
}

CoupledModeParams drive_frame(const CoupledModeParams& p, const OptomechParams& om) {
  p.validate();
  om.validate();
  const double split = p.omega_a - p.omega_d;
  const double scale = std::max({std::abs(p.omega_a), std::abs(p.omega_d), std::abs(om.delta_a),
                                 std::abs(om.delta_d), 1.0});
  if (std::abs((om.delta_a - om.delta_d) - split) > 1e-9 * scale)
    throw std::invalid_argument(
        "drive_frame(): delta_a - delta_d inconsistent with omega_a - omega_d");
  CoupledModeParams out = p;
  out.omega_a = om.delta_a;
  out.omega_d = om.delta_d;
  return out;
}

OptomechParams make_optomech(const CoupledModeParams& p, double omega_m, double gamma_m,
                             double nbar, double g, double delta_d) {
  p.validate();
  OptomechParams om;
  om.omega_m = omega_m;
  om.gamma_m = gamma_m;
  om.nbar = nbar;
  om.g = g;
  om.delta_d = delta_d;
  om.delta_a = delta_d + (p.omega_a - p.omega_d);
  om.validate();
  return om;
}

ComplexSpectrum make_spectrum(Eigen::VectorXd grid, Eigen::VectorXcd values, SpectrumKind kind) {
  ComplexSpectrum s{std::move(grid), std::move(values), kind};
  s.validate();
  return s;
}

Eigen::VectorXd linear_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linear_grid(): need n >= 1");
  if (n == 1) {
    if (lo != hi) throw std::invalid_argument("linear_grid(): single point requires lo == hi");
    return Eigen::VectorXd::Constant(1, lo);
  }
  if (!(lo < hi)) throw std::invalid_argument("linear_grid(): require lo < hi");
  Eigen::VectorXd g(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo + static_cast<double>(i) * step;
  g[n - 1] = hi;  // land exactly on the endpoint
  return g;
}

}  // namespace fanocav
