#ifndef FANOCAV_COUPLED_MODE_HPP
#define FANOCAV_COUPLED_MODE_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "fanocav/model.hpp"
#include "fanocav/numerics.hpp"

namespace fanocav {

// Memory kernel of the form
//   k(t) = delta_weight * dirac(t) + exp_amplitude * exp(-exp_rate * t),  t >= 0,
// with exp_rate = i * omega_d + gamma for every kernel in this model.
struct KernelCoefficients {
  std::complex<double> delta_weight{0.0, 0.0};
  std::complex<double> exp_amplitude{0.0, 0.0};
  std::complex<double> exp_rate{0.0, 0.0};
};

// Weight assigned to the t = 0 endpoint of the one-sided Fourier transform
//   K(omega) = w * delta_weight + exp_amplitude / (exp_rate - i * omega).
// `half` (w = 1/2) matches the convolution equation of motion, where the
// delta sits on the integration boundary; `full` (w = 1) treats the kernel
// as supported strictly inside the domain.
enum class DeltaWeight { half, full };

// Memory kernel acting on the cavity amplitude itself.
KernelCoefficients kernel_kappa_eff(const CoupledModeParams& p);
// Kernel mapping the left input field into the cavity equation.
KernelCoefficients kernel_kappa_in(const CoupledModeParams& p);
// Conjugate-path input kernel; identical to kernel_kappa_in when phi is 0 or pi.
KernelCoefficients kernel_kappa_in_prime(const CoupledModeParams& p);
// Kernel mapping the cavity amplitude into the left output field.
KernelCoefficients kernel_kappa_out(const CoupledModeParams& p);

// Exponential (non-delta) part of the kernel at time t >= 0.
std::complex<double> kernel_tail(const KernelCoefficients& k, double t);

// One-sided Fourier transform of the kernel at frequency omega.
std::complex<double> kernel_spectrum(const KernelCoefficients& k, double omega,
                                     DeltaWeight weight);

// Linear response functions at frequency omega (same frame as p):
//   chi_a = 1 / (kappa - i (omega - omega_a))      bare cavity
//   chi_d = 1 / (gamma - i (omega - omega_d))      mirror resonance
//   chi_a_dressed = 1 / (1/chi_a - G+ G- chi_d)    cavity dressed by the mirror
struct Susceptibilities {
  std::complex<double> chi_a;
  std::complex<double> chi_d;
  std::complex<double> chi_a_dressed;
};
Susceptibilities susceptibilities(const CoupledModeParams& p, double omega);

// Steady-state amplitude transmission of the coupled-mode model at probe
// detuning delta. Shares the detuning convention of transmission_spectrum_tm,
// so the two models can be compared pointwise on a common grid.
std::complex<double> cavity_transmission_cm(const CoupledModeParams& p, double delta);

// Transmission amplitude over a detuning grid; bytewise independent of `threads`.
ComplexSpectrum transmission_spectrum_cm(const CoupledModeParams& p,
                                         const Eigen::VectorXd& grid, int threads = 1);

// Mean-field state of the two coupled modes.
struct MeanState {
  std::complex<double> a;  // cavity amplitude
  std::complex<double> d;  // mirror-mode amplitude
};

using DriveFunction = std::function<std::complex<double>(double)>;

// Integrates the coupled mean-field equations
//   da/dt = -(i omega_a + kappa) a - G+ d + sqrt(2 kappa_L) beta(t)
//   dd/dt = -(i omega_d + gamma) d - G- a + sqrt(2 gamma)  beta(t)
// from t = 0 (a = d = 0) to t1 with fixed-step RK4. Requires
// step <= 0.1 / max(kappa_L, gamma, |omega_a|, |omega_d|); integrate in a
// rotating frame (see drive_frame) when absolute frequencies are large.
std::vector<TimePoint<MeanState>> simulate_mean_response(const CoupledModeParams& p,
                                                         const DriveFunction& drive,
                                                         double t1, double step);

// Integrates the equivalent single-mode convolution equation
//   da/dt = -(i omega_a + kappa_R) a - (kappa_eff * a)(t) + (kappa_in * beta)(t)
// with the delta parts of the kernels taking half weight at the t boundary.
// History integrals use exponentially factorized trapezoidal recursion (O(1)
// per step); the amplitude advances by a Heun predictor-corrector. MeanState.d
// is reconstructed from the same history integrals,
//   d(t) = -G_- hist_a(t) + sqrt(2 gamma) hist_b(t),
// so trajectories are directly comparable with simulate_mean_response.
std::vector<TimePoint<MeanState>> simulate_mean_convolution(const CoupledModeParams& p,
                                                            const DriveFunction& drive,
                                                            double t1, double step);

// Full width at half maximum of |spectrum|^2, located by scanning the sampled
// grid outward from the peak and linearly interpolating the half crossings.
double effective_linewidth(const ComplexSpectrum& spectrum);

// Full width at half maximum of a positive intensity function on [lo, hi]:
// dense scan + golden-section peak refinement + bisection of the two half
// crossings to absolute tolerance tol on the crossing positions.
double effective_linewidth(const std::function<double(double)>& intensity, double lo,
                           double hi, double tol);

}  // namespace fanocav

#endif  // FANOCAV_COUPLED_MODE_HPP
