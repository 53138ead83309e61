#ifndef FANOCAV_NUMERICS_HPP
#define FANOCAV_NUMERICS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace fanocav {

template <typename Scalar>
struct SolveResult {
  Eigen::Vector<Scalar, Eigen::Dynamic> x;
  double rcond;  // reciprocal condition estimate from the LU factors
};

// Dense LU solve with partial pivoting. Matrices here are at most 36x36
// (vectorized Lyapunov systems), so a direct factorization is always adequate.
template <typename Scalar>
SolveResult<Scalar> solve_dense(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                                const Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("solve_dense(): matrix must be square");
  if (m.rows() != b.size())
    throw std::invalid_argument("solve_dense(): right-hand side size mismatch");
  if (!m.allFinite() || !b.allFinite())
    throw std::invalid_argument("solve_dense(): non-finite entries");

  Eigen::PartialPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(m);
  const double rcond = lu.rcond();

  // Pivot diagnostics: the smallest |U_ii| relative to the largest flags the
  // offending elimination step when the system is numerically singular.
  const auto u_diag = lu.matrixLU().diagonal();
  double u_min = std::numeric_limits<double>::infinity(), u_max = 0.0;
  Eigen::Index u_argmin = 0;
  for (Eigen::Index i = 0; i < u_diag.size(); ++i) {
    const double a = std::abs(u_diag[i]);
    if (a < u_min) { u_min = a; u_argmin = i; }
    u_max = std::max(u_max, a);
  }
  if (u_min == 0.0 || !(rcond > 1e-15)) {
    std::ostringstream msg;
    msg << "solve_dense(): matrix singular to working precision (rcond = " << rcond
        << ", |U[" << u_argmin << "][" << u_argmin << "]| = " << u_min
        << ", max |U_ii| = " << u_max << ")";
    throw std::runtime_error(msg.str());
  }
  return {lu.solve(b), rcond};
}

// Full (unordered) spectrum of a real square matrix.
inline Eigen::VectorXcd eigenvalues_real(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eigenvalues_real(): matrix must be square");
  if (!m.allFinite())
    throw std::invalid_argument("eigenvalues_real(): non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_real(): QR iteration failed to converge");
  return es.eigenvalues();
}

namespace detail {

template <typename State>
bool state_finite(const State& y) {
  if constexpr (std::is_floating_point_v<State>) {
    return std::isfinite(y);
  } else if constexpr (std::is_same_v<State, std::complex<double>>) {
    return std::isfinite(y.real()) && std::isfinite(y.imag());
  } else {
    return y.allFinite();
  }
}

}  // namespace detail

template <typename State>
struct TimePoint {
  double t;
  State y;
};

// One classical Runge-Kutta step for dy/dt = f(t, y).
template <typename State, typename Deriv>
State rk4_step(const Deriv& f, double t, double h, const State& y) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {

inline long long step_count(const char* fn, double t0, double t1, double step) {
  const std::string name(fn);
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument(name + "(): step must be positive and finite");
  if (!(t1 > t0))
    throw std::invalid_argument(name + "(): require t1 > t0");
  const double span = t1 - t0;
  const long long n = std::llround(span / step);
  if (n < 1 || std::abs(n * step - span) > 1e-9 * std::max(span, step))
    throw std::invalid_argument(name + "(): step must divide (t1 - t0) up to rounding");
  return n;
}

}  // namespace detail

// Fixed-step RK4 over [t0, t1]; global error O(step^4) with constant set by the
// 5th derivative of the solution along the trajectory.
template <typename State, typename Deriv>
std::vector<TimePoint<State>> integrate_fixed(const Deriv& f, State y0, double t0, double t1,
                                              double step) {
  const long long n = detail::step_count("integrate_fixed", t0, t1, step);
  std::vector<TimePoint<State>> traj;
  traj.reserve(static_cast<std::size_t>(n) + 1);
  traj.push_back({t0, y0});
  State y = std::move(y0);
  for (long long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * step;
    y = rk4_step(f, t, step, y);
    if (!detail::state_finite(y)) {
      std::ostringstream msg;
      msg << "integrate_fixed(): state became non-finite at t = " << t + step;
      throw std::runtime_error(msg.str());
    }
    traj.push_back({t0 + static_cast<double>(i + 1) * step, y});
  }
  return traj;
}

// Same integration without storing the trajectory (long relaxation runs).
template <typename State, typename Deriv>
State integrate_final(const Deriv& f, State y0, double t0, double t1, double step) {
  const long long n = detail::step_count("integrate_final", t0, t1, step);
  State y = std::move(y0);
  for (long long i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * step;
    y = rk4_step(f, t, step, y);
    if (!detail::state_finite(y)) {
      std::ostringstream msg;
      msg << "integrate_final(): state became non-finite at t = " << t + step;
      throw std::runtime_error(msg.str());
    }
  }
  return y;
}

// Bisection refinement of a bracketed root: f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("bisect(): endpoints do not bracket a sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fanocav

#endif  // FANOCAV_NUMERICS_HPP
