#ifndef FANOCAV_MODEL_HPP
#define FANOCAV_MODEL_HPP

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace fanocav {

// All frequencies and rates are dimensionless angular frequencies in a
// caller-chosen reference unit (e.g. omega_m = 1 for cooling studies).
//
// Detuning convention used throughout: delta = omega_d - omega, where omega_d
// is the mirror-mode resonance and omega the probe frequency.

// Physical description of a two-mirror cavity whose left mirror carries a
// sharp internal (Fano) resonance.
struct PhysicalSetup {
  double zeta0 = 1.0;    // resonant polarizability of the left (Fano) mirror
  double zeta_r = 1.0;   // right-mirror polarizability; +inf = one-sided, 0 = no right mirror
  double fsr = 1.0;      // free spectral range Gamma = c/2L
  double gamma = 1.0;    // mirror-mode HWHM
  double omega_d = 0.0;  // mirror internal resonance frequency
  int s = -1;            // Fano orientation sign, +1 or -1

  bool one_sided() const { return std::isinf(zeta_r); }
  void validate() const;  // throws std::invalid_argument on bad fields
};

// Parameters of the equivalent two-mode quantum model. Produced by
// identify_parameters(); may also be constructed directly for general studies.
struct CoupledModeParams {
  double omega_a = 0.0;  // cavity quasi-mode frequency
  double omega_d = 0.0;  // mirror-mode frequency
  double lambda = 0.0;   // signed a<->d coupling rate
  double phi = 0.0;      // coupling phase; identification yields phi = 0 with signed lambda
  double kappa_l = 0.0;  // left tunnel rate
  double kappa_r = 0.0;  // right tunnel rate (0 = one-sided)
  double kappa_0 = 0.0;  // effective left-mirror loss rate
  double gamma = 0.0;    // mirror-mode HWHM

  double kappa() const { return kappa_l + kappa_r; }
  void validate() const;
};

enum class SpectrumKind { transmission, reflection, susceptibility, force_psd };

// Sampled complex response over a strictly increasing frequency grid.
// For kind = force_psd the values are real (imaginary parts zero).
struct ComplexSpectrum {
  Eigen::VectorXd grid;
  Eigen::VectorXcd values;
  SpectrumKind kind = SpectrumKind::transmission;

  Eigen::VectorXd intensity() const { return values.cwiseAbs2(); }
  void validate() const;  // grid ordering + size consistency
};

// Mechanical oscillator, bath, and drive parameters for sideband cooling.
// delta_a/delta_d are drive detunings: delta_x = omega_x - omega_laser.
struct OptomechParams {
  double omega_m = 1.0;   // mechanical frequency
  double gamma_m = 1e-6;  // mechanical damping
  double nbar = 0.0;      // thermal bath occupation
  double g = 0.0;         // linearized optomechanical coupling
  double delta_a = 0.0;   // cavity drive detuning
  double delta_d = 0.0;   // mirror-mode drive detuning

  void validate() const;
};

// Maps the physical mirror data onto the two-mode model:
//   kappa_l = 2 Gamma,  kappa_0 = Gamma/(2 zeta0^2),  kappa_r = Gamma/(2 zeta_r^2),
//   lambda  = -s sqrt(kappa_0 gamma),  omega_a = omega_d - 2 s sqrt(kappa_0 kappa_l),
//   phi = 0 (the orientation sign is carried by lambda).
// One-sided cavities (zeta_r = +inf) map to kappa_r = 0.
CoupledModeParams identify_parameters(const PhysicalSetup& setup);

// Couplings G_pm = i lambda e^{+-i phi} + sqrt(kappa_l gamma). Under
// identification G_+ = G_- = sqrt(kappa_l gamma) - i s sqrt(kappa_0 gamma).
std::pair<std::complex<double>, std::complex<double>> coupling_g(const CoupledModeParams& p);

// Shifts both mode frequencies into the frame rotating at omega_ref
// (omega_a -> omega_a - omega_ref, same for omega_d).
CoupledModeParams rotating_frame(const CoupledModeParams& p, double omega_ref);

// Drive-frame params consistent with om's detunings: omega_a -> delta_a,
// omega_d -> delta_d. Requires delta_a - delta_d = omega_a - omega_d.
CoupledModeParams drive_frame(const CoupledModeParams& p, const OptomechParams& om);

// OptomechParams with delta_a derived from delta_d and the mode splitting of p.
OptomechParams make_optomech(const CoupledModeParams& p, double omega_m, double gamma_m,
                             double nbar, double g, double delta_d);

ComplexSpectrum make_spectrum(Eigen::VectorXd grid, Eigen::VectorXcd values, SpectrumKind kind);

// Uniform grid helper: n points from lo to hi inclusive (n >= 2), or the
// single point lo when n == 1 and lo == hi.
Eigen::VectorXd linear_grid(double lo, double hi, int n);

}  // namespace fanocav

#endif  // FANOCAV_MODEL_HPP
