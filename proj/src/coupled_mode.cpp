#include "fanocav/coupled_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fanocav/parallel.hpp"

namespace fanocav {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

std::complex<double> exp_rate_of(const CoupledModeParams& p) {
  return {p.gamma, p.omega_d};  // gamma + i*omega_d
}

double max_rate_scale(const CoupledModeParams& p) {
  return std::max({p.kappa_l, p.gamma, std::abs(p.omega_a), std::abs(p.omega_d)});
}

void check_step(const char* fn, const CoupledModeParams& p, double t1, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument(std::string(fn) + "(): step must be positive and finite");
  }
  if (!(t1 > 0.0) || !std::isfinite(t1)) {
    throw std::invalid_argument(std::string(fn) + "(): t1 must be positive and finite");
  }
  const double scale = max_rate_scale(p);
  if (scale > 0.0 && step > 0.1 / scale) {
    throw std::invalid_argument(
        std::string(fn) + "(): step " + std::to_string(step) +
        " exceeds 0.1 / max(kappa_l, gamma, |omega_a|, |omega_d|) = " +
        std::to_string(0.1 / scale) +
        "; reduce the step or move to a rotating frame (see drive_frame) to "
        "remove fast phase oscillation");
  }
}

}  // namespace

KernelCoefficients kernel_kappa_eff(const CoupledModeParams& p) {
  p.validate();
  const auto [gp, gm] = coupling_g(p);
  return {2.0 * p.kappa_l, -gp * gm, exp_rate_of(p)};
}

KernelCoefficients kernel_kappa_in(const CoupledModeParams& p) {
  p.validate();
  const auto [gp, gm] = coupling_g(p);
  (void)gm;
  return {2.0 * std::sqrt(2.0 * p.kappa_l), -gp * std::sqrt(2.0 * p.gamma), exp_rate_of(p)};
}

KernelCoefficients kernel_kappa_in_prime(const CoupledModeParams& p) {
  p.validate();
  const auto [gp, gm] = coupling_g(p);
  (void)gp;
  return {2.0 * std::sqrt(2.0 * p.kappa_l), -gm * std::sqrt(2.0 * p.gamma), exp_rate_of(p)};
}

KernelCoefficients kernel_kappa_out(const CoupledModeParams& p) {
  p.validate();
  return {2.0, {-2.0 * p.gamma, 0.0}, exp_rate_of(p)};
}

std::complex<double> kernel_tail(const KernelCoefficients& k, double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("kernel_tail(): t must be >= 0");
  }
  return k.exp_amplitude * std::exp(-k.exp_rate * t);
}

std::complex<double> kernel_spectrum(const KernelCoefficients& k, double omega,
                                     DeltaWeight weight) {
  const double w = (weight == DeltaWeight::half) ? 0.5 : 1.0;
  return w * k.delta_weight + k.exp_amplitude / (k.exp_rate - kI * omega);
}

Susceptibilities susceptibilities(const CoupledModeParams& p, double omega) {
  p.validate();
  const auto [gp, gm] = coupling_g(p);
  Susceptibilities s;
  const std::complex<double> inv_a{p.kappa(), -(omega - p.omega_a)};
  const std::complex<double> inv_d{p.gamma, -(omega - p.omega_d)};
  s.chi_a = 1.0 / inv_a;
  s.chi_d = 1.0 / inv_d;
  s.chi_a_dressed = 1.0 / (inv_a - gp * gm * s.chi_d);
  return s;
}

std::complex<double> cavity_transmission_cm(const CoupledModeParams& p, double delta) {
  p.validate();
  const double split = p.omega_a - p.omega_d;
  const std::complex<double> numerator =
      2.0 * kI * std::sqrt(p.kappa_r) *
      (std::exp(kI * p.phi) * p.lambda * std::sqrt(p.gamma) - delta * std::sqrt(p.kappa_l));
  const double re = p.lambda * p.lambda + p.kappa_r * p.gamma - delta * (delta + split);
  const double im = p.gamma * (delta + split) + p.kappa() * delta -
                    2.0 * p.lambda * std::sqrt(p.kappa_l * p.gamma) * std::cos(p.phi);
  return numerator / std::complex<double>{re, im};
}

ComplexSpectrum transmission_spectrum_cm(const CoupledModeParams& p,
                                         const Eigen::VectorXd& grid, int threads) {
  p.validate();
  Eigen::VectorXcd values(grid.size());
  parallel_for(static_cast<std::size_t>(grid.size()), threads, [&](std::size_t i) {
    values[static_cast<Eigen::Index>(i)] =
        cavity_transmission_cm(p, grid[static_cast<Eigen::Index>(i)]);
  });
  return make_spectrum(grid, values, SpectrumKind::transmission);
}

std::vector<TimePoint<MeanState>> simulate_mean_response(const CoupledModeParams& p,
                                                         const DriveFunction& drive,
                                                         double t1, double step) {
  p.validate();
  check_step("simulate_mean_response", p, t1, step);
  const auto [gp, gm] = coupling_g(p);
  const std::complex<double> pole_a{p.kappa(), p.omega_a};   // kappa + i*omega_a
  const std::complex<double> pole_d{p.gamma, p.omega_d};     // gamma + i*omega_d
  const double in_a = std::sqrt(2.0 * p.kappa_l);
  const double in_d = std::sqrt(2.0 * p.gamma);

  auto rhs = [&](double t, const Eigen::Vector2cd& y) -> Eigen::Vector2cd {
    const std::complex<double> beta = drive(t);
    Eigen::Vector2cd dy;
    dy[0] = -pole_a * y[0] - gp * y[1] + in_a * beta;
    dy[1] = -pole_d * y[1] - gm * y[0] + in_d * beta;
    return dy;
  };

  const auto raw = integrate_fixed(rhs, Eigen::Vector2cd(Eigen::Vector2cd::Zero()), 0.0, t1, step);
  std::vector<TimePoint<MeanState>> out;
  out.reserve(raw.size());
  for (const auto& pt : raw) {
    out.push_back({pt.t, MeanState{pt.y[0], pt.y[1]}});
  }
  return out;
}

std::vector<TimePoint<MeanState>> simulate_mean_convolution(const CoupledModeParams& p,
                                                            const DriveFunction& drive,
                                                            double t1, double step) {
  p.validate();
  check_step("simulate_mean_convolution", p, t1, step);
  const KernelCoefficients eff = kernel_kappa_eff(p);
  const KernelCoefficients in = kernel_kappa_in(p);
  const std::complex<double> rate = eff.exp_rate;
  // Instantaneous part: -(i omega_a + kappa_R) a - (1/2) * delta_weight(eff) a
  //                     + (1/2) * delta_weight(in) beta.
  const std::complex<double> inst_a =
      -(kI * p.omega_a + std::complex<double>{p.kappa_r, 0.0}) - 0.5 * eff.delta_weight;
  const std::complex<double> inst_in = 0.5 * in.delta_weight;

  const long long n_steps = detail::step_count("simulate_mean_convolution", 0.0, t1, step);
  const double h = step;
  const std::complex<double> decay = std::exp(-rate * h);
  // The mirror mode is a functional of the same convolution integrals:
  // d(t) = -G_- hist_a(t) + sqrt(2 gamma) hist_b(t).
  const std::complex<double> g_minus = coupling_g(p).second;
  const double root_2gamma = std::sqrt(2.0 * p.gamma);
  auto mirror_mode = [&](const std::complex<double>& hist_a_now,
                         const std::complex<double>& hist_b_now) {
    return -g_minus * hist_a_now + root_2gamma * hist_b_now;
  };

  auto rhs = [&](const std::complex<double>& a, const std::complex<double>& hist_a,
                 const std::complex<double>& hist_b, const std::complex<double>& beta) {
    return inst_a * a - eff.exp_amplitude * hist_a + inst_in * beta + in.exp_amplitude * hist_b;
  };

  std::vector<TimePoint<MeanState>> out;
  out.reserve(static_cast<std::size_t>(n_steps) + 1);
  std::complex<double> a{0.0, 0.0};
  std::complex<double> hist_a{0.0, 0.0};  // int_0^t exp(-rate (t - tau)) a(tau) dtau
  std::complex<double> hist_b{0.0, 0.0};  // same with the drive beta
  std::complex<double> beta = drive(0.0);
  out.push_back({0.0, MeanState{a, mirror_mode(hist_a, hist_b)}});

  for (long long n = 0; n < n_steps; ++n) {
    const double t_next = (n + 1 == n_steps) ? t1 : (static_cast<double>(n + 1) * h);
    const std::complex<double> beta_next = drive(t_next);
    const std::complex<double> f0 = rhs(a, hist_a, hist_b, beta);
    const std::complex<double> a_pred = a + h * f0;
    const std::complex<double> base_a = decay * (hist_a + 0.5 * h * a);
    const std::complex<double> base_b = decay * (hist_b + 0.5 * h * beta);
    const std::complex<double> hist_b_next = base_b + 0.5 * h * beta_next;
    const std::complex<double> hist_a_pred = base_a + 0.5 * h * a_pred;
    const std::complex<double> f1 = rhs(a_pred, hist_a_pred, hist_b_next, beta_next);
    a = a + 0.5 * h * (f0 + f1);
    hist_a = base_a + 0.5 * h * a;
    hist_b = hist_b_next;
    beta = beta_next;
    if (!detail::state_finite(a)) {
      throw std::runtime_error(
          "simulate_mean_convolution(): state became non-finite at t = " +
          std::to_string(t_next));
    }
    out.push_back({t_next, MeanState{a, mirror_mode(hist_a, hist_b)}});
  }
  return out;
}

double effective_linewidth(const ComplexSpectrum& spectrum) {
  spectrum.validate();
  const Eigen::Index n = spectrum.grid.size();
  if (n < 3) {
    throw std::invalid_argument("effective_linewidth(): need at least 3 samples");
  }
  const Eigen::VectorXd intensity = spectrum.intensity();
  Eigen::Index peak = 0;
  intensity.maxCoeff(&peak);
  const double half = 0.5 * intensity[peak];

  auto interpolate = [&](Eigen::Index below, Eigen::Index above) {
    const double v0 = intensity[below];
    const double v1 = intensity[above];
    const double x0 = spectrum.grid[below];
    const double x1 = spectrum.grid[above];
    return x0 + (half - v0) / (v1 - v0) * (x1 - x0);
  };

  Eigen::Index j = peak;
  while (j > 0 && intensity[j - 1] >= half) --j;
  if (j == 0 && intensity[0] >= half) {
    throw std::runtime_error(
        "effective_linewidth(): left half-maximum crossing not bracketed by the grid");
  }
  const double left = interpolate(j - 1, j);

  Eigen::Index k = peak;
  while (k < n - 1 && intensity[k + 1] >= half) ++k;
  if (k == n - 1 && intensity[n - 1] >= half) {
    throw std::runtime_error(
        "effective_linewidth(): right half-maximum crossing not bracketed by the grid");
  }
  const double right = interpolate(k + 1, k);
  return right - left;
}

double effective_linewidth(const std::function<double(double)>& intensity, double lo,
                           double hi, double tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("effective_linewidth(): require finite lo < hi");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("effective_linewidth(): tol must be positive");
  }
  constexpr int kScan = 4096;
  const double dx = (hi - lo) / kScan;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<double> samples(kScan + 1);
  for (int i = 0; i <= kScan; ++i) {
    samples[i] = intensity(lo + i * dx);
    if (samples[i] > best_val) {
      best_val = samples[i];
      best = i;
    }
  }

  // Golden-section refinement of the peak within the bracketing samples.
  double a = lo + std::max(0, best - 1) * dx;
  double b = lo + std::min(kScan, best + 1) * dx;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = intensity(x1);
  double f2 = intensity(x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-3 * tol; ++iter) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = intensity(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = intensity(x1);
    }
  }
  const double x_peak = 0.5 * (a + b);
  const double peak_val = intensity(x_peak);
  const double half = 0.5 * peak_val;
  auto above_half = [&](double x) { return intensity(x) - half; };

  // Nearest scan samples below half on each side of the peak bracket the crossings.
  int li = best;
  while (li > 0 && samples[li] >= half) --li;
  if (samples[li] >= half) {
    throw std::runtime_error(
        "effective_linewidth(): left half-maximum crossing not bracketed in [lo, hi]");
  }
  int ri = best;
  while (ri < kScan && samples[ri] >= half) ++ri;
  if (samples[ri] >= half) {
    throw std::runtime_error(
        "effective_linewidth(): right half-maximum crossing not bracketed in [lo, hi]");
  }
  const double left = bisect(above_half, lo + li * dx, std::min(x_peak, lo + (li + 1) * dx), tol);
  const double right = bisect(above_half, std::max(x_peak, lo + (ri - 1) * dx), lo + ri * dx, tol);
  return right - left;
}

}  // namespace fanocav
