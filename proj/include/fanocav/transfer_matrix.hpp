#ifndef FANOCAV_TRANSFER_MATRIX_HPP
#define FANOCAV_TRANSFER_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "fanocav/model.hpp"

namespace fanocav {

using Mirror2x2 = Eigen::Matrix2cd;

// Dimensionless polarizability of the frequency-dependent left mirror,
//   zeta_L(delta) = zeta0 * (gamma - 2 s delta / zeta0) / (gamma + 2 s zeta0 delta).
// Returns a signed infinity at the pole delta = -s * gamma / (2 zeta0), where the
// mirror becomes perfectly reflective.
double fano_polarizability(const PhysicalSetup& setup, double delta);

// Detuning at which fano_polarizability diverges (perfect-reflection point).
double polarizability_pole(const PhysicalSetup& setup);

// Field transfer matrix of a single lossless mirror with polarizability zeta:
//   [[1 + i zeta, i zeta], [-i zeta, 1 - i zeta]].
// Unit determinant; off-diagonals conjugate, diagonals conjugate.
Mirror2x2 mirror_matrix(double zeta);

// One-way propagation phase accumulated between the mirrors at detuning delta,
//   theta = (delta / fsr + atan(1 / zeta_R) + atan(1 / zeta0)) / 2,
// with 1/inf handled as 0 (perfectly reflective right mirror).
double propagation_phase(const PhysicalSetup& setup, double delta);

// Complex amplitude transmission of the compound cavity at detuning delta.
// Exactly 0 when either mirror is perfectly reflective (pole or zeta_r = inf).
std::complex<double> cavity_transmission_tm(const PhysicalSetup& setup, double delta);

// Complex amplitude reflection; exactly -1 at the left-mirror pole.
std::complex<double> cavity_reflection_tm(const PhysicalSetup& setup, double delta);

// Transmission amplitude sampled over a detuning grid. `threads` bounds worker
// count; the result is bytewise independent of it.
ComplexSpectrum transmission_spectrum_tm(const PhysicalSetup& setup,
                                         const Eigen::VectorXd& grid, int threads = 1);

}  // namespace fanocav

#endif  // FANOCAV_TRANSFER_MATRIX_HPP
