#include "fanocav/transfer_matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fanocav/parallel.hpp"

namespace fanocav {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// (m21, m22) of the compound transfer matrix, divided by every infinite
// polarizability factor so the pair stays finite at perfect-reflection points.
// The common scale cancels in r = -m21 / m22; |scale| -> inf forces t -> 0.
struct ScaledElements {
  std::complex<double> m21;
  std::complex<double> m22;
  bool scaled;  // true when at least one mirror is perfectly reflective
};

ScaledElements compound_elements(double zeta_l, double zeta_r, double theta) {
  const std::complex<double> ep = std::exp(kI * theta);
  const std::complex<double> em = std::conj(ep);
  const bool l_inf = std::isinf(zeta_l);
  const bool r_inf = std::isinf(zeta_r);
  ScaledElements out;
  out.scaled = l_inf || r_inf;
  if (!l_inf && !r_inf) {
    out.m22 = (1.0 - kI * zeta_r) * (1.0 - kI * zeta_l) * em + zeta_r * zeta_l * ep;
    out.m21 = -kI * (zeta_r * (1.0 + kI * zeta_l) * ep + zeta_l * (1.0 - kI * zeta_r) * em);
  } else if (l_inf && !r_inf) {
    out.m22 = (1.0 - kI * zeta_r) * (-kI) * em + zeta_r * ep;
    out.m21 = -kI * (zeta_r * kI * ep + (1.0 - kI * zeta_r) * em);
  } else if (!l_inf && r_inf) {
    out.m22 = -kI * (1.0 - kI * zeta_l) * em + zeta_l * ep;
    out.m21 = -kI * ((1.0 + kI * zeta_l) * ep - kI * zeta_l * em);
  } else {
    out.m22 = -em + ep;
    out.m21 = ep - em;
  }
  return out;
}

}  // namespace

double fano_polarizability(const PhysicalSetup& setup, double delta) {
  setup.validate();
  if (!std::isfinite(delta)) {
    throw std::invalid_argument("fano_polarizability(): delta must be finite");
  }
  const double num = setup.zeta0 * setup.gamma - 2.0 * setup.s * delta;
  const double den = setup.gamma + 2.0 * setup.s * setup.zeta0 * delta;
  if (den == 0.0) {
    return num > 0.0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  }
  return num / den;
}

double polarizability_pole(const PhysicalSetup& setup) {
  setup.validate();
  return -setup.s * setup.gamma / (2.0 * setup.zeta0);
}

Mirror2x2 mirror_matrix(double zeta) {
  if (std::isnan(zeta)) {
    throw std::invalid_argument("mirror_matrix(): zeta must not be NaN");
  }
  Mirror2x2 m;
  m << 1.0 + kI * zeta, kI * zeta, -kI * zeta, 1.0 - kI * zeta;
  return m;
}

double propagation_phase(const PhysicalSetup& setup, double delta) {
  setup.validate();
  const double inv_zr = std::isinf(setup.zeta_r) ? 0.0 : 1.0 / setup.zeta_r;
  return 0.5 * (delta / setup.fsr + std::atan(inv_zr) + std::atan(1.0 / setup.zeta0));
}

std::complex<double> cavity_transmission_tm(const PhysicalSetup& setup, double delta) {
  const double zeta_l = fano_polarizability(setup, delta);
  const double theta = propagation_phase(setup, delta);
  const ScaledElements el = compound_elements(zeta_l, setup.zeta_r, theta);
  if (el.scaled) return {0.0, 0.0};
  return 1.0 / el.m22;
}

std::complex<double> cavity_reflection_tm(const PhysicalSetup& setup, double delta) {
  const double zeta_l = fano_polarizability(setup, delta);
  const double theta = propagation_phase(setup, delta);
  const ScaledElements el = compound_elements(zeta_l, setup.zeta_r, theta);
  return -el.m21 / el.m22;
}

ComplexSpectrum transmission_spectrum_tm(const PhysicalSetup& setup,
                                         const Eigen::VectorXd& grid, int threads) {
  setup.validate();
  Eigen::VectorXcd values(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), threads, [&](std::size_t i) {
    values[static_cast<Eigen::Index>(i)] =
        cavity_transmission_tm(setup, grid[static_cast<Eigen::Index>(i)]);
  });
  return make_spectrum(grid, values, SpectrumKind::transmission);
}

}  // namespace fanocav
