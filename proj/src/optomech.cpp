#include "fanocav/optomech.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fanocav/coupled_mode.hpp"
#include "fanocav/numerics.hpp"
#include "fanocav/parallel.hpp"

namespace fanocav {

namespace {

// Drive-frame copy of cm: mode frequencies replaced by the detunings in om.
CoupledModeParams drive_frame_params(const CoupledModeParams& cm, const OptomechParams& om) {
  cm.validate();
  om.validate();
  CoupledModeParams p = cm;
  p.omega_a = om.delta_a;
  p.omega_d = om.delta_d;
  return p;
}

struct ClosedFormShape {
  double kappa0;  // lambda^2 / gamma
  double s;       // -sign(lambda cos(phi)); 0 when lambda cos(phi) == 0
};

ClosedFormShape closed_form_shape(const char* fn, const CoupledModeParams& cm,
                                  const OptomechParams& om) {
  const std::string name(fn);
  const double c = std::cos(cm.phi);
  if (std::abs(std::sin(cm.phi)) > 1e-12) {
    throw std::invalid_argument(name + "(): requires phi in {0, pi} (mod 2 pi)");
  }
  if (!(cm.gamma > 0.0)) {
    throw std::invalid_argument(name + "(): requires gamma > 0");
  }
  ClosedFormShape shape;
  shape.kappa0 = cm.lambda * cm.lambda / cm.gamma;
  const double lam_proj = cm.lambda * c;
  shape.s = (lam_proj > 0.0) ? -1.0 : (lam_proj < 0.0 ? 1.0 : 0.0);
  const double split = -2.0 * shape.s * std::sqrt(shape.kappa0 * cm.kappa_l);
  const double scale =
      std::max({1.0, std::abs(om.delta_a), std::abs(om.delta_d), std::abs(split)});
  if (std::abs((om.delta_a - om.delta_d) - split) > 1e-9 * scale) {
    throw std::invalid_argument(
        name +
        "(): detunings must satisfy delta_a - delta_d = -2 s sqrt(kappa_0 kappa_L) "
        "(identified-parameter relation)");
  }
  return shape;
}

}  // namespace

double force_psd(const CoupledModeParams& cm, const OptomechParams& om, double omega) {
  const CoupledModeParams p = drive_frame_params(cm, om);
  const auto [gp, gm] = coupling_g(p);
  (void)gm;
  const Susceptibilities chi = susceptibilities(p, omega);
  const std::complex<double> filt =
      std::sqrt(p.kappa_l) - gp * chi.chi_d * std::sqrt(p.gamma);
  return 2.0 * om.g * om.g * std::norm(chi.chi_a_dressed) * (p.kappa_r + std::norm(filt));
}

double force_psd_closed_form(const CoupledModeParams& cm, const OptomechParams& om,
                             double omega) {
  const ClosedFormShape shape = closed_form_shape("force_psd_closed_form", cm, om);
  const double k0 = shape.kappa0;
  const double s = shape.s;
  const double g2 = om.g * om.g;
  const double gam = cm.gamma;
  const double kl = cm.kappa_l;
  const double kr = cm.kappa_r;
  const double u = omega - om.delta_d;
  const double num =
      kr * (gam * gam + u * u) +
      std::pow(gam * std::sqrt(k0) - s * u * std::sqrt(kl), 2);
  const double t1 = (cm.kappa() + gam) * u;
  const double t2 = gam * (k0 + kr) - u * (u + 2.0 * s * std::sqrt(k0 * kl));
  return 2.0 * g2 * num / (t1 * t1 + t2 * t2);
}

double cooling_rate(const CoupledModeParams& cm, const OptomechParams& om) {
  return 0.5 * (force_psd(cm, om, om.omega_m) - force_psd(cm, om, -om.omega_m));
}

OperatingPoint optimal_operating_point(const PhysicalSetup& setup, double omega_m) {
  if (!(omega_m > 0.0) || !std::isfinite(omega_m)) {
    throw std::invalid_argument("optimal_operating_point(): omega_m must be positive");
  }
  setup.validate();
  OperatingPoint op;
  op.delta_d_cool = omega_m;
  op.delta_d_heat_min = -omega_m - setup.s * setup.gamma / (2.0 * setup.zeta0);
  op.gamma_opt = 4.0 * setup.zeta0 * omega_m;
  return op;
}

double heat_minimum_detuning(const CoupledModeParams& cm, double omega_m) {
  if (!(omega_m > 0.0) || !std::isfinite(omega_m)) {
    throw std::invalid_argument("heat_minimum_detuning(): omega_m must be positive");
  }
  cm.validate();
  if (std::abs(std::sin(cm.phi)) > 1e-12) {
    throw std::invalid_argument("heat_minimum_detuning(): requires phi in {0, pi} (mod 2 pi)");
  }
  if (!(cm.gamma > 0.0) || !(cm.kappa_l > 0.0)) {
    throw std::invalid_argument("heat_minimum_detuning(): requires gamma > 0 and kappa_l > 0");
  }
  const double k0 = cm.lambda * cm.lambda / cm.gamma;
  const double lam_proj = cm.lambda * std::cos(cm.phi);
  const double s = (lam_proj > 0.0) ? -1.0 : (lam_proj < 0.0 ? 1.0 : 0.0);
  return -omega_m - s * cm.gamma * std::sqrt(k0 / cm.kappa_l);
}

Matrix6d build_drift(const CoupledModeParams& cm, const OptomechParams& om) {
  cm.validate();
  om.validate();
  const double kap = cm.kappa();
  const double gam = cm.gamma;
  const double da = om.delta_a;
  const double dd = om.delta_d;
  const double c = std::sqrt(cm.kappa_l * gam);
  const double mu = cm.lambda * std::cos(cm.phi);
  const double g2 = 2.0 * om.g;
  Matrix6d a;
  a << -kap,   da,  -c,   mu,  0.0,          0.0,
       -da,  -kap,  -mu,  -c,  -g2,          0.0,
       -c,     mu, -gam,  dd,  0.0,          0.0,
       -mu,   -c,  -dd, -gam,  0.0,          0.0,
        0.0,  0.0,  0.0, 0.0, -om.gamma_m,   om.omega_m,
       -g2,   0.0,  0.0, 0.0, -om.omega_m,  -om.gamma_m;
  return a;
}

Matrix6d build_noise(const CoupledModeParams& cm, const OptomechParams& om) {
  cm.validate();
  om.validate();
  const double c = std::sqrt(cm.kappa_l * cm.gamma);
  const double mech = 2.0 * om.gamma_m * (2.0 * om.nbar + 1.0);
  Matrix6d n = Matrix6d::Zero();
  n(0, 0) = n(1, 1) = 2.0 * cm.kappa();
  n(2, 2) = n(3, 3) = 2.0 * cm.gamma;
  n(4, 4) = n(5, 5) = mech;
  n(0, 2) = n(2, 0) = 2.0 * c;
  n(1, 3) = n(3, 1) = 2.0 * c;
  return n;
}

bool is_stable(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("is_stable(): matrix must be square and non-empty");
  }
  const double margin = 1e-12 * a.norm();
  const Eigen::VectorXcd eig = eigenvalues_real(a);
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (!(eig[i].real() < -margin)) return false;
  }
  return true;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& n) {
  const Eigen::Index dim = a.rows();
  if (a.cols() != dim || n.rows() != dim || n.cols() != dim) {
    throw std::invalid_argument("solve_lyapunov(): A and N must be square with equal size");
  }
  if (!n.isApprox(n.transpose(), 1e-12)) {
    throw std::invalid_argument("solve_lyapunov(): N must be symmetric");
  }
  if (!is_stable(a)) {
    const double max_re = eigenvalues_real(a).real().maxCoeff();
    std::ostringstream msg;
    msg << "solve_lyapunov(): drift matrix is not strictly stable (max Re eigenvalue = "
        << max_re << ")";
    throw std::runtime_error(msg.str());
  }
  // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V) = -vec(N)
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd kron(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      kron.block(i * dim, j * dim, dim, dim) = eye(i, j) * a;  // A (x) I part, vec column-major
      kron.block(i * dim, j * dim, dim, dim) += a(i, j) * eye;
    }
  }
  Eigen::VectorXd rhs(dim * dim);
  for (Eigen::Index j = 0; j < dim; ++j) rhs.segment(j * dim, dim) = -n.col(j);
  const auto sol = solve_dense<double>(kron, rhs);
  Eigen::MatrixXd v(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) v.col(j) = sol.x.segment(j * dim, dim);
  return 0.5 * (v + v.transpose());
}

SteadyState steady_covariance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& n) {
  SteadyState out;
  out.covariance = solve_lyapunov(a, n);
  const Eigen::MatrixXd res =
      a * out.covariance + out.covariance * a.transpose() + n;
  out.residual = res.cwiseAbs().maxCoeff();
  const double bound = 1e-9 * n.cwiseAbs().maxCoeff();
  if (!(out.residual <= bound)) {
    std::ostringstream msg;
    msg << "steady_covariance(): residual " << out.residual
        << " exceeds 1e-9 * max|N| = " << bound
        << " (drift matrix likely near-marginally stable or badly conditioned)";
    throw std::runtime_error(msg.str());
  }
  return out;
}

double mode_occupation(const Eigen::MatrixXd& v, int q_index) {
  if (q_index < 0 || static_cast<Eigen::Index>(q_index) + 1 >= v.rows() ||
      v.rows() != v.cols()) {
    throw std::invalid_argument("mode_occupation(): q_index out of range");
  }
  return 0.25 * (v(q_index, q_index) + v(q_index + 1, q_index + 1) - 2.0);
}

namespace {

template <typename DriftFn, typename NoiseFn>
std::vector<CoolingPoint> occupation_sweep(const Eigen::VectorXd& g_values, int threads,
                                           int q_index, const DriftFn& drift_at,
                                           const NoiseFn& noise_at) {
  std::vector<CoolingPoint> out(static_cast<std::size_t>(g_values.size()));
  parallel_for(static_cast<std::size_t>(g_values.size()), threads, [&](std::size_t i) {
    const double g = g_values[static_cast<Eigen::Index>(i)];
    CoolingPoint pt;
    pt.g = g;
    const Eigen::MatrixXd a = drift_at(g);
    if (!is_stable(a)) {
      pt.stable = false;
      pt.n_f = std::numeric_limits<double>::quiet_NaN();
    } else {
      pt.stable = true;
      pt.n_f = mode_occupation(solve_lyapunov(a, noise_at(g)), q_index);
    }
    out[i] = pt;
  });
  return out;
}

}  // namespace

std::vector<CoolingPoint> cooling_curve(const CoupledModeParams& cm, const OptomechParams& om,
                                        const Eigen::VectorXd& g_values, int threads) {
  cm.validate();
  om.validate();
  return occupation_sweep(
      g_values, threads, 4,
      [&](double g) {
        OptomechParams o = om;
        o.g = g;
        return Eigen::MatrixXd(build_drift(cm, o));
      },
      [&](double g) {
        OptomechParams o = om;
        o.g = g;
        return Eigen::MatrixXd(build_noise(cm, o));
      });
}

std::vector<CoolingPoint> cooling_curve(const PhysicalSetup& setup, const OptomechParams& om,
                                        const Eigen::VectorXd& g_values, int threads) {
  return cooling_curve(identify_parameters(setup), om, g_values, threads);
}

Eigen::Matrix4d build_drift_markovian(double kappa, double delta_a, const OptomechParams& om) {
  om.validate();
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("build_drift_markovian(): kappa must be positive and finite");
  }
  if (!std::isfinite(delta_a)) {
    throw std::invalid_argument("build_drift_markovian(): delta_a must be finite");
  }
  const double g2 = 2.0 * om.g;
  Eigen::Matrix4d a;
  a << -kappa,  delta_a,  0.0,          0.0,
       -delta_a, -kappa, -g2,           0.0,
        0.0,     0.0,    -om.gamma_m,   om.omega_m,
       -g2,      0.0,    -om.omega_m,  -om.gamma_m;
  return a;
}

Eigen::Matrix4d build_noise_markovian(double kappa, const OptomechParams& om) {
  om.validate();
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("build_noise_markovian(): kappa must be positive and finite");
  }
  Eigen::Matrix4d n = Eigen::Matrix4d::Zero();
  const double mech = 2.0 * om.gamma_m * (2.0 * om.nbar + 1.0);
  n(0, 0) = n(1, 1) = 2.0 * kappa;
  n(2, 2) = n(3, 3) = mech;
  return n;
}

std::vector<CoolingPoint> markovian_cooling_curve(double kappa, double delta_a,
                                                  const OptomechParams& om,
                                                  const Eigen::VectorXd& g_values,
                                                  int threads) {
  om.validate();
  return occupation_sweep(
      g_values, threads, 2,
      [&](double g) {
        OptomechParams o = om;
        o.g = g;
        return Eigen::MatrixXd(build_drift_markovian(kappa, delta_a, o));
      },
      [&](double g) {
        OptomechParams o = om;
        o.g = g;
        return Eigen::MatrixXd(build_noise_markovian(kappa, o));
      });
}

double occupancy_rate_picture(const CoupledModeParams& cm, const OptomechParams& om) {
  const double heat = force_psd(cm, om, -om.omega_m);
  const double rate = cooling_rate(cm, om);
  return (om.gamma_m * om.nbar + 0.5 * heat) / (om.gamma_m + rate);
}

}  // namespace fanocav
