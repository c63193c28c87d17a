#include "qpsmc/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "qpsmc/errors.hpp"

namespace qpsmc {

namespace {

bool within_neighbours(std::size_t j, double x, const Configuration& q) {
  if (j > 0 && x <= q[j - 1]) return false;
  if (j + 1 < q.size() && x >= q[j + 1]) return false;
  return true;
}

} // namespace

LocalMode locate_minimum(std::size_t j, const Configuration& q, const ModelParams& p) {
  if (j >= q.size()) throw ParameterError("particle index out of range");
  LocalMode mode;
  const double u_here = particle_energy(j, q, p);

  double x = q[j];
  for (int it = 0; it < p.newton_iters; ++it) {
    const ParticleDerivatives d = particle_derivatives_at(j, x, q, p);
    if (!p.newton_safeguard) {
      x -= d.gradient / d.hessian;
      if (!std::isfinite(x) || !within_neighbours(j, x, q)) return mode;
      continue;
    }
    // Newton step, or a fixed downhill step where the curvature is not
    // positive; halved until the energy does not rise and the order is kept.
    double step = d.hessian > 0.0 ? -d.gradient / d.hessian
                                  : (d.gradient > 0.0 ? -kNewtonMaxStep : kNewtonMaxStep);
    if (!std::isfinite(step)) return mode;
    const double u0 = particle_energy_at(j, x, q, p);
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      const double y = x + step;
      if (within_neighbours(j, y, q) && particle_energy_at(j, y, q, p) <= u0) {
        x = y;
        break;
      }
    }
  }
  const ParticleDerivatives d = particle_derivatives_at(j, x, q, p);
  mode.q_bar = x;
  mode.u_bar = particle_energy_at(j, x, q, p);
  mode.curvature = d.hessian;
  mode.excess = u_here - mode.u_bar;
  if (!std::isfinite(mode.u_bar) || !(d.hessian > 0.0)) return mode;

  mode.omega = std::sqrt(d.hessian);
  mode.displacement = std::sqrt(mode.omega) * (q[j] - x);

  // Unconverged Newton: the remaining step must be small on the zero-point scale.
  if (std::abs(d.gradient / d.hessian) * std::sqrt(mode.omega) > kNewtonTolerance) return mode;

  // Newton ending above the starting energy has left the basin of q_j.
  const double slack = 1e-9 * (std::abs(u_here) + p.omega);
  if (mode.excess < -slack) return mode;

  switch (p.cut_criterion) {
  case CutCriterion::energy:
    mode.active = mode.excess < p.u_cut_energy();
    break;
  case CutCriterion::displacement:
    // Harmonic estimate of the excess, (1/2) hbar omega_j Q_j^2.
    mode.active = 0.5 * mode.omega * mode.displacement * mode.displacement < p.u_cut_energy();
    break;
  }
  return mode;
}

std::vector<LocalMode> locate_minima(const Configuration& q, const ModelParams& p) {
  std::vector<LocalMode> modes(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) modes[j] = locate_minimum(j, q, p);
  return modes;
}

double hermite(int n, double z) {
  if (n < 0) throw ParameterError("hermite: degree must be >= 0");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * z;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * z * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

std::span<const double> hermite_coefficients(int n) {
  static std::mutex lock;
  static std::vector<std::vector<double>> table{{1.0}, {0.0, 2.0}};
  if (n < 0) throw ParameterError("hermite_coefficients: degree must be >= 0");
  std::lock_guard guard(lock);
  while (static_cast<int>(table.size()) <= n) {
    const int k = static_cast<int>(table.size()) - 1; // build H_{k+1}
    const auto& a = table[k];
    const auto& b = table[k - 1];
    std::vector<double> c(k + 2, 0.0);
    for (int i = 0; i <= k; ++i) c[i + 1] += 2.0 * a[i];
    for (int i = 0; i < k; ++i) c[i] -= 2.0 * k * b[i];
    table.push_back(std::move(c));
  }
  return table[n];
}

void hermite_functions(double z, std::span<double> out) {
  hermite_functions_unscaled(z, out);
  const double g = std::exp(-0.5 * z * z);
  for (double& v : out) v *= g;
}

void hermite_functions_unscaled(double z, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  if (out.size() == 1) return;
  out[1] = std::numbers::sqrt2 * z * out[0];
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const double a = std::sqrt(2.0 / (n + 1.0));
    const double b = std::sqrt(n / (n + 1.0));
    out[n + 1] = a * z * out[n] - b * out[n - 1];
  }
}

namespace {

std::complex<double> i_pow(int n) {
  switch (n & 3) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

} // namespace

MomentumPolynomial w_sho_polynomial(const LocalMode& mode, double b, int n_max) {
  if (!mode.active) throw ParameterError("w_sho_polynomial: mode is inactive");
  if (n_max < 0) throw ParameterError("w_sho_polynomial: n_max must be >= 0");
  const double Q = mode.displacement;
  MomentumPolynomial w;
  w.alpha = 1.0;
  w.phase = -Q;
  w.mb_width = b;
  w.log_scale = 0.5 * (b - 1.0) * Q * Q;
  w.coeffs.assign(n_max + 1, {0.0, 0.0});

  const double pref = std::numbers::sqrt2;
  double scale = std::exp(-0.5 * b); // e^{-b(n+1/2)} / (2^n n!)
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) scale *= std::exp(-b) / (2.0 * n);
    const std::complex<double> cn = pref * scale * hermite(n, Q) * i_pow(n);
    const auto h = hermite_coefficients(n);
    for (int k = 0; k <= n; ++k) {
      if (h[k] != 0.0) w.coeffs[k] += cn * h[k];
    }
  }
  return w;
}

std::complex<double> evaluate(const MomentumPolynomial& w, double P) {
  std::complex<double> poly{0.0, 0.0};
  for (std::size_t k = w.coeffs.size(); k-- > 0;) poly = poly * P + w.coeffs[k];
  const double gauss = std::exp(0.5 * (w.mb_width - w.alpha) * P * P + w.log_scale);
  return gauss * std::polar(1.0, P * w.phase) * poly;
}

std::complex<double> w_sho_series(double P, double Q, double b, int n_max) {
  std::complex<double> sum{0.0, 0.0};
  double scale = std::exp(-0.5 * b);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) scale *= std::exp(-b) / (2.0 * n);
    sum += i_pow(n) * scale * hermite(n, P) * hermite(n, Q);
  }
  const double gauss = std::exp(0.5 * (b - 1.0) * (P * P + Q * Q));
  return std::numbers::sqrt2 * std::polar(1.0, -P * Q) * gauss * sum;
}

std::complex<double> w_sho_closed_form(double P, double Q, double b) {
  const std::complex<double> rho{0.0, std::exp(-b)};
  const std::complex<double> one_m = 1.0 - rho * rho;
  const std::complex<double> expo =
      (2.0 * P * Q * rho - (P * P + Q * Q) * rho * rho) / one_m;
  const double gauss = std::exp(0.5 * (b - 1.0) * (P * P + Q * Q) - 0.5 * b);
  return std::numbers::sqrt2 * std::polar(1.0, -P * Q) * gauss * std::exp(expo) /
         std::sqrt(one_m);
}

} // namespace qpsmc
