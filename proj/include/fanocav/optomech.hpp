#ifndef FANOCAV_OPTOMECH_HPP
#define FANOCAV_OPTOMECH_HPP

#include <Eigen/Dense>
#include <vector>

#include "fanocav/model.hpp"

namespace fanocav {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Quantum backaction force spectral density seen by the mechanical mode,
//   S_F(omega) = 2 g^2 |chi_a_dressed(omega)|^2
//                * (kappa_R + |sqrt(kappa_L) - G+ chi_d(omega) sqrt(gamma)|^2),
// evaluated in the drive frame: the cavity sits at om.delta_a, the mirror
// mode at om.delta_d, and omega is the sideband frequency (+omega_m cooling,
// -omega_m heating). Rates and couplings come from cm; detunings from om.
double force_psd(const CoupledModeParams& cm, const OptomechParams& om, double omega);

// Same quantity as an explicit rational function of u = omega - om.delta_d.
// Valid only for identified parameters: phi in {0, pi} and detunings obeying
// delta_a - delta_d = -2 s sqrt(kappa_0 kappa_L) with kappa_0 = lambda^2/gamma
// and s = -sign(lambda cos(phi)); throws otherwise.
double force_psd_closed_form(const CoupledModeParams& cm, const OptomechParams& om,
                             double omega);

// Net sideband-cooling rate (1/2) [S_F(+omega_m) - S_F(-omega_m)].
double cooling_rate(const CoupledModeParams& cm, const OptomechParams& om);

// Closed-form operating points for sideband cooling of a mode at omega_m.
struct OperatingPoint {
  double delta_d_cool;      // drive detuning putting the cooling sideband on resonance
  double delta_d_heat_min;  // drive detuning minimizing the heating sideband weight
  double gamma_opt;         // mirror linewidth at which both optima coincide
};
OperatingPoint optimal_operating_point(const PhysicalSetup& setup, double omega_m);

// Heating-minimum detuning -omega_m - s * gamma * sqrt(kappa_0 / kappa_L) for
// general identified parameters (phi in {0, pi}).
double heat_minimum_detuning(const CoupledModeParams& cm, double omega_m);

// Drift matrix of the linearized quadrature dynamics in the ordered basis
// (X_a, Y_a, X_d, Y_d, q, p); drive-frame detunings come from om.
Matrix6d build_drift(const CoupledModeParams& cm, const OptomechParams& om);

// Symmetrized input-noise matrix for the same basis, including the
// correlated optical-mirror noise from the shared left input field.
Matrix6d build_noise(const CoupledModeParams& cm, const OptomechParams& om);

// True when every drift eigenvalue satisfies Re < -1e-12 * ||A||_F.
bool is_stable(const Eigen::MatrixXd& a);

// Solves A V + V A^T + N = 0 for symmetric V via the Kronecker-sum linear
// system; requires a strictly stable A.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& n);

struct SteadyState {
  Eigen::MatrixXd covariance;  // symmetric steady-state covariance
  double residual;             // max-norm of A V + V A^T + N
};

// Steady-state covariance with a verified residual <= 1e-9 * max|N_ij|.
SteadyState steady_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& n);

// Mean occupation (V_qq + V_pp - 2) / 4 of the oscillator whose position
// quadrature sits at q_index (momentum at q_index + 1).
double mode_occupation(const Eigen::MatrixXd& v, int q_index);

struct CoolingPoint {
  double g;      // linearized optomechanical coupling
  double n_f;    // steady phonon occupation (NaN when unstable)
  bool stable;
};

// Steady phonon occupation versus coupling for the frequency-dependent
// mirror model; unstable points are flagged and carry n_f = NaN.
std::vector<CoolingPoint> cooling_curve(const CoupledModeParams& cm, const OptomechParams& om,
                                        const Eigen::VectorXd& g_values, int threads = 1);

// Convenience overload: identifies the two-mode parameters from the physical
// mirror data first.
std::vector<CoolingPoint> cooling_curve(const PhysicalSetup& setup, const OptomechParams& om,
                                        const Eigen::VectorXd& g_values, int threads = 1);

// Drift / noise of a single Markovian cavity (basis X_a, Y_a, q, p) with total
// linewidth kappa and cavity detuning delta_a, for baseline comparisons.
Eigen::Matrix4d build_drift_markovian(double kappa, double delta_a, const OptomechParams& om);
Eigen::Matrix4d build_noise_markovian(double kappa, const OptomechParams& om);

std::vector<CoolingPoint> markovian_cooling_curve(double kappa, double delta_a,
                                                  const OptomechParams& om,
                                                  const Eigen::VectorXd& g_values,
                                                  int threads = 1);

// Phonon occupation predicted by sideband rate balance,
//   n_f = (gamma_m nbar + S_F(-omega_m)/2) / (gamma_m + cooling_rate),
// accurate to a few percent against the covariance solution well inside the
// stable weak-coupling regime.
double occupancy_rate_picture(const CoupledModeParams& cm, const OptomechParams& om);

}  // namespace fanocav

#endif  // FANOCAV_OPTOMECH_HPP
