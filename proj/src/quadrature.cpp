#include "qpsmc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qpsmc/errors.hpp"

namespace qpsmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// (2m-1)!!, with (-1)!! = 1.
double double_factorial_odd(int m) {
  double r = 1.0;
  for (int k = 2 * m - 1; k > 1; k -= 2) r *= k;
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ScaledIntegral integrate_classical(double beta, double phase, int k) {
  return {-0.5 * phase * phase / beta, gaussian_moment_unscaled(beta, phase, k)};
}

ScaledIntegral integrate_monomial(const LocalMode& mode, const MomentumPolynomial& w,
                                  double phase, int k) {
  const double root = std::sqrt(mode.omega);
  const double shifted = w.phase + phase * root;
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t m = 0; m < w.coeffs.size(); ++m) {
    if (w.coeffs[m] == 0.0) continue;
    sum += w.coeffs[m] * gaussian_moment_unscaled(w.alpha, shifted, static_cast<int>(m) + k);
  }
  return {w.log_scale - 0.5 * shifted * shifted / w.alpha, std::pow(root, k + 1) * sum};
}

ScaledIntegral integrate_hermite(const LocalMode& mode, double b, int n_max, double phase, int k) {
  const double root = std::sqrt(mode.omega);
  const double Q = mode.displacement;
  const double x = Q - phase * root;
  std::vector<double> fq(n_max + 1), fx(n_max + 1);
  hermite_functions_unscaled(Q, fq);
  hermite_functions_unscaled(x, fx);
  double sum = 0.0;
  double t = std::exp(-0.5 * b);
  const double step = std::exp(-b);
  for (int n = 0; n <= n_max; ++n) {
    const double insert = k == 0 ? 1.0 : (2.0 * n + 1.0 - x * x);
    sum += t * fq[n] * fx[n] * insert;
    t *= step;
  }
  return {0.5 * (b - 1.0) * Q * Q - 0.5 * x * x, std::pow(root, k + 1) * kTwoPi * sum};
}

ScaledIntegral integrate_mehler(const LocalMode& mode, double b, double phase, int k) {
  const double root = std::sqrt(mode.omega);
  const double Q = mode.displacement;
  const double x = Q - phase * root;
  // log sinh b without overflow.
  const double log_sinh = b > 20.0 ? b - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * b))
                                   : std::log(std::sinh(b));
  const double log_rho = -0.5 * (std::log(kTwoPi) + log_sinh) -
                         0.5 * (Q - x) * (Q - x) / std::tanh(b) - Q * x * std::tanh(0.5 * b);
  double value = 1.0;
  if (k == 2) {
    const double sinh_b = std::sinh(b);
    const double dlog = -0.5 / std::tanh(b) + 0.5 * (Q - x) * (Q - x) / (sinh_b * sinh_b) -
                        Q * x / (std::cosh(b) + 1.0);
    value *= -2.0 * dlog - x * x;
  }
  return {log_rho + 0.5 * b * Q * Q, std::pow(root, k + 1) * kTwoPi * value};
}

} // namespace

std::complex<double> gaussian_moment(double alpha, double phase, int n) {
  return std::exp(-0.5 * phase * phase / alpha) * gaussian_moment_unscaled(alpha, phase, n);
}

std::complex<double> gaussian_moment_unscaled(double alpha, double phase, int n) {
  if (!(alpha > 0.0)) throw ParameterError("gaussian_moment: alpha must be positive");
  if (n < 0) throw ParameterError("gaussian_moment: n must be >= 0");
  const double root = std::sqrt(alpha);
  const std::complex<double> z{0.0, phase / root};
  std::complex<double> sum{0.0, 0.0};
  for (int m = 0; 2 * m <= n; ++m) {
    sum += binomial(n, 2 * m) * double_factorial_odd(m) * std::pow(z, n - 2 * m);
  }
  return std::sqrt(kTwoPi) * std::pow(alpha, -0.5 * (n + 1)) * sum;
}

ScaledIntegral integrate_particle_scaled(const LocalMode& mode, const MomentumPolynomial* w,
                                         std::span<const double> dimer_phases, int kinetic_order,
                                         const ModelParams& p) {
  if (kinetic_order != 0 && kinetic_order != 2) {
    throw ParameterError("integrate_particle: kinetic_order must be 0 or 2");
  }
  double phase = 0.0;
  for (double ph : dimer_phases) phase += ph;
  if (!p.commutation || !mode.active) return integrate_classical(p.beta, phase, kinetic_order);

  const double b = p.beta * mode.omega;
  switch (p.quadrature) {
  case QuadratureRoute::monomial: {
    if (w) return integrate_monomial(mode, *w, phase, kinetic_order);
    const MomentumPolynomial local = w_sho_polynomial(mode, b, p.hermite_order);
    return integrate_monomial(mode, local, phase, kinetic_order);
  }
  case QuadratureRoute::hermite:
    return integrate_hermite(mode, b, p.hermite_order, phase, kinetic_order);
  case QuadratureRoute::mehler:
    return integrate_mehler(mode, b, phase, kinetic_order);
  }
  return {};
}

std::complex<double> integrate_particle(const LocalMode& mode, const MomentumPolynomial* w,
                                        std::span<const double> dimer_phases, int kinetic_order,
                                        const ModelParams& p) {
  const ScaledIntegral s = integrate_particle_scaled(mode, w, dimer_phases, kinetic_order, p);
  return std::exp(s.log_factor) * s.value;
}

double IntegratedWeight::log_magnitude() const {
  return log_scale + std::log(std::abs(value));
}

double IntegratedWeight::weight() const { return std::exp(log_scale) * value; }

double IntegratedWeight::kinetic_numerator() const { return std::exp(log_scale) * kinetic; }

namespace {

// Phase states of one particle: untouched, left member of dimer (j, j+1),
// right member of dimer (j-1, j).
enum State : int { kFree = 0, kLeft = 1, kRight = 2 };

struct ParticleTable {
  std::complex<double> base;              // I_j(0) / norm
  std::array<std::complex<double>, 3> r;  // I_j(s) / I_j(0)
  std::array<std::complex<double>, 3> k;  // (1/2) J_j(s) / I_j(0)
};

} // namespace

IntegratedWeight integrated_weight(const Configuration& q, std::span<const LocalMode> modes,
                                   std::span<const SymTerm> terms, const ModelParams& p) {
  const std::size_t n = q.size();
  if (modes.size() != n) throw ParameterError("integrated_weight: one mode per particle required");

  bool need_pairs = false;
  for (const SymTerm& t : terms) need_pairs = need_pairs || t.n_dimers > 0;

  const double norm = std::sqrt(kTwoPi / p.beta);
  std::vector<ParticleTable> table(n);
  IntegratedWeight out;
  double residual = 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const LocalMode& mode = modes[j];
    const bool active = p.commutation && mode.active;
    MomentumPolynomial poly;
    const MomentumPolynomial* wp = nullptr;
    if (active && p.quadrature == QuadratureRoute::monomial) {
      poly = w_sho_polynomial(mode, p.beta * mode.omega, p.hermite_order);
      wp = &poly;
    }
    std::array<double, 3> phase{0.0, 0.0, 0.0};
    if (j + 1 < n) phase[kLeft] = q[j] - q[j + 1];
    if (j > 0) phase[kRight] = -(q[j - 1] - q[j]);

    ParticleTable& row = table[j];
    const int n_states = need_pairs ? 3 : 1;
    std::array<double, 3> lf{};
    std::array<std::complex<double>, 3> i0{}, i2{};
    const int n_coupled = p.dimer_rule == DimerRule::coupled ? n_states : 1;
    for (int s = 0; s < n_coupled; ++s) {
      if (s == kLeft && j + 1 >= n) continue;
      if (s == kRight && j == 0) continue;
      const std::array<double, 1> ph{phase[s]};
      const ScaledIntegral a = integrate_particle_scaled(mode, wp, ph, 0, p);
      const ScaledIntegral c = integrate_particle_scaled(mode, wp, ph, 2, p);
      lf[s] = a.log_factor;
      i0[s] = a.value;
      i2[s] = c.value;
    }
    const double re = i0[kFree].real();
    if (!(std::abs(re) > 0.0) || !std::isfinite(re)) {
      throw std::runtime_error("integrated_weight: vanishing single-particle weight");
    }
    residual = std::max(residual, std::abs(i0[kFree].imag()) / std::abs(i0[kFree]));
    row.base = i0[kFree] / norm;
    out.log_scale += lf[kFree] + std::log(std::abs(re) / norm);
    for (int s = 0; s < n_coupled; ++s) {
      const double rel = std::exp(lf[s] - lf[kFree]);
      row.r[s] = rel * i0[s] / i0[kFree];
      row.k[s] = rel * 0.5 * i2[s] / i0[kFree];
    }
    // Factorized rule: classical phase factor and its kinetic shift on top
    // of the particle's monomer integral.
    for (int s = n_coupled; s < n_states; ++s) {
      const double c = std::exp(-0.5 * phase[s] * phase[s] / p.beta);
      row.r[s] = c;
      row.k[s] = c * (row.k[kFree] - 0.5 * phase[s] * phase[s] / (p.beta * p.beta));
    }
  }
  // Sign of the monomer product (positive for any exact or truncated series).
  double base_sign = 1.0;
  for (const auto& row : table) base_sign *= row.base.real() < 0.0 ? -1.0 : 1.0;

  std::complex<double> kin_free{0.0, 0.0};
  for (const auto& row : table) kin_free += row.k[kFree];

  std::complex<double> value{0.0, 0.0}, kinetic{0.0, 0.0}, monomer{0.0, 0.0};
  std::array<std::size_t, 4> idx{};
  std::array<int, 4> state{};
  for (const SymTerm& t : terms) {
    std::size_t m = 0;
    for (const Dimer& d : t.loops()) {
      idx[m] = d.left;
      state[m++] = kLeft;
      idx[m] = d.left + 1;
      state[m++] = kRight;
    }
    std::complex<double> prod{1.0, 0.0};
    std::complex<double> rest = kin_free;
    for (std::size_t a = 0; a < m; ++a) {
      prod *= table[idx[a]].r[state[a]];
      rest -= table[idx[a]].k[kFree];
    }
    std::complex<double> kin = prod * rest;
    for (std::size_t a = 0; a < m; ++a) {
      std::complex<double> others = table[idx[a]].k[state[a]];
      for (std::size_t b = 0; b < m; ++b) {
        if (b != a) others *= table[idx[b]].r[state[b]];
      }
      kin += others;
    }
    value += static_cast<double>(t.sign) * prod;
    kinetic += static_cast<double>(t.sign) * kin;
    if (m == 0) monomer += prod;
  }

  if (std::abs(value) > 0.0) residual = std::max(residual, std::abs(value.imag()) / std::abs(value));
  out.value = base_sign * value.real();
  out.kinetic = base_sign * kinetic.real();
  out.monomer = base_sign * monomer.real();
  out.imag_residual = residual;
  return out;
}

} // namespace qpsmc
