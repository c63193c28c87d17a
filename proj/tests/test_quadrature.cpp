#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qpsmc/errors.hpp"
#include "qpsmc/quadrature.hpp"

using namespace qpsmc;
using Catch::Approx;
using cplx = std::complex<double>;

namespace {

// Adaptive Gauss-Kronrod over [-L, L] of a complex integrand.
// Points where a factor over- or underflows lie deep in the Gaussian tail.
template <class F>
cplx integrate(F f, double L) {
  using boost::math::quadrature::gauss_kronrod;
  const auto safe = [&](double x) {
    const cplx v = f(x);
    return std::isfinite(v.real()) && std::isfinite(v.imag()) ? v : cplx{};
  };
  const auto re = [&](double x) { return safe(x).real(); };
  const auto im = [&](double x) { return safe(x).imag(); };
  return {gauss_kronrod<double, 61>::integrate(re, -L, L, 15, 1e-13),
          gauss_kronrod<double, 61>::integrate(im, -L, L, 15, 1e-13)};
}

bool close(cplx a, cplx b, double rel) {
  const bool ok = std::abs(a - b) <= rel * std::max(std::abs(b), 1e-300);
  if (!ok) UNSCOPED_INFO("got " << a << ", reference " << b);
  return ok;
}

ModelParams params(QuadratureRoute route, int n_max, double beta_lj = 17.0) {
  AlgorithmOptions o;
  o.n_particles = 1;
  o.quadrature = route;
  o.hermite_order = n_max;
  return build_params(0.16, 0.5, beta_lj, o);
}

LocalMode mode(double omega, double Q) {
  LocalMode m;
  m.active = true;
  m.omega = omega;
  m.displacement = Q;
  return m;
}

} // namespace

TEST_CASE("Gaussian moments against numerical quadrature", "[quadrature]") {
  for (double alpha : {0.3, 1.0, 2.5}) {
    for (double phase : {0.0, 0.7, -1.9}) {
      for (int n = 0; n <= 8; ++n) {
        const double L = 14.0 / std::sqrt(alpha) + 3.0;
        const cplx ref = integrate(
            [&](double P) { return std::exp(-0.5 * alpha * P * P) * std::polar(1.0, P * phase) * std::pow(P, n); },
            L);
        const cplx got = gaussian_moment(alpha, phase, n);
        CHECK(std::abs(got - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
      }
    }
  }
  CHECK(gaussian_moment(1.0, 0.0, 0) == cplx(std::sqrt(2.0 * std::numbers::pi), 0.0));
  CHECK_THROWS_AS(gaussian_moment(0.0, 0.0, 0), ParameterError);
  CHECK_THROWS_AS(gaussian_moment(1.0, 0.0, -1), ParameterError);
}

TEST_CASE("per-particle momentum integrals against numerical quadrature", "[quadrature]") {
  struct Case {
    double omega, Q, phase;
  };
  const std::vector<Case> cases{{3.5, 0.0, 0.0}, {30.0, 0.8, 0.0}, {30.0, -1.3, -1.05}, {60.0, 2.0, 0.9}};
  for (const Case& c : cases) {
    const LocalMode m = mode(c.omega, c.Q);
    const double root = std::sqrt(c.omega);
    const std::vector<double> ph{c.phase};
    for (int k : {0, 2}) {
      const ModelParams pm = params(QuadratureRoute::mehler, 0);
      const double b = pm.beta * c.omega;
      // W widens the integrand to about sqrt(omega_j) in p.
      const double L = 14.0 * std::max(1.0 / std::sqrt(pm.beta), root) + 2.0 * std::abs(c.Q) * root;
      const cplx exact = integrate(
          [&](double p) {
            return std::exp(-0.5 * pm.beta * p * p) * w_sho_closed_form(p / root, c.Q, b) *
                   std::polar(1.0, c.phase * p) * std::pow(p, k);
          },
          L);
      CHECK(close(integrate_particle(m, nullptr, ph, k, pm), exact, 1e-8));

      for (auto route : {QuadratureRoute::monomial, QuadratureRoute::hermite}) {
        const ModelParams pt = params(route, 6);
        const cplx series = integrate(
            [&](double p) {
              return std::exp(-0.5 * pt.beta * p * p) * w_sho_series(p / root, c.Q, b, 6) *
                     std::polar(1.0, c.phase * p) * std::pow(p, k);
            },
            L);
        CHECK(close(integrate_particle(m, nullptr, ph, k, pt), series, 1e-8));
      }
    }
  }
}

TEST_CASE("inactive and classical integrals are Gaussian", "[quadrature]") {
  const ModelParams p = params(QuadratureRoute::monomial, 6);
  const LocalMode inactive;
  const std::vector<double> ph{0.4};
  CHECK(close(integrate_particle(inactive, nullptr, ph, 2, p), gaussian_moment(p.beta, 0.4, 2), 1e-12));
  const ScaledIntegral s = integrate_particle_scaled(inactive, nullptr, ph, 0, p);
  CHECK(s.log_factor == Approx(-0.08 / p.beta));
}

TEST_CASE("scaled integrals survive large displacements", "[quadrature]") {
  for (auto route : {QuadratureRoute::monomial, QuadratureRoute::hermite, QuadratureRoute::mehler}) {
    const ModelParams p = params(route, 6);
    const ScaledIntegral s = integrate_particle_scaled(mode(40.0, 35.0), nullptr, {}, 0, p);
    CHECK(std::isfinite(s.log_factor));
    CHECK(std::isfinite(s.value.real()));
    CHECK(s.value.real() != 0.0);
  }
}

TEST_CASE("configuration weights are real", "[quadrature]") {
  AlgorithmOptions o;
  o.n_particles = 4;
  o.sym_order = 3;
  o.statistics = Statistics::fermion;
  o.newton_safeguard = true;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (auto route : {QuadratureRoute::monomial, QuadratureRoute::hermite, QuadratureRoute::mehler}) {
    o.quadrature = route;
    const ModelParams p = build_params(0.16, 0.5, 17.0, o);
    double worst = 0.0;
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> x{-1.5, -0.5, 0.5, 1.5};
      for (double& v : x) v += jitter(rng);
      const Configuration q(x);
      const auto modes = locate_minima(q, p);
      const auto terms = enumerate_terms(q, p.sym_order, p.statistics);
      const IntegratedWeight w = integrated_weight(q, modes, terms, p);
      REQUIRE(std::isfinite(w.log_scale));
      worst = std::max(worst, w.imag_residual);
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("integrated weight reduces to the classical Boltzmann factor", "[quadrature]") {
  AlgorithmOptions o;
  o.n_particles = 3;
  o.commutation = false;
  const ModelParams p = build_params(0.16, 0.5, 17.0, o);
  const Configuration q({-1.0, 0.0, 1.0});
  const std::vector<LocalMode> modes(3);
  const auto terms = enumerate_terms(q, 1, Statistics::boson);
  const IntegratedWeight w = integrated_weight(q, modes, terms, p);
  CHECK(w.weight() == Approx(1.0));
  // <p^2/2> = 1/(2 beta) per particle.
  CHECK(w.kinetic_numerator() == Approx(1.5 / p.beta));
  CHECK(w.monomer == Approx(w.value));
}
