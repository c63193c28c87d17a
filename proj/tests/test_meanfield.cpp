#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include <boost/math/special_functions/hermite.hpp>

#include "qpsmc/meanfield.hpp"

using namespace qpsmc;
using Catch::Approx;

namespace {

ModelParams trap_only(double beta_lj, int n = 1) {
  AlgorithmOptions o;
  o.n_particles = n;
  return build_params(0.16, 0.5, beta_lj, o);
}

} // namespace

TEST_CASE("Hermite polynomials", "[meanfield]") {
  CHECK(hermite(4, 1.0) == Approx(-20.0));
  CHECK(hermite(0, 3.0) == 1.0);
  for (int n = 0; n <= 20; ++n) {
    for (double z : {-2.3, -0.4, 0.0, 0.7, 1.9}) {
      CHECK(hermite(n, z) == Approx(boost::math::hermite(n, z)).epsilon(1e-12));
      if (n > 0) {
        const double h = 1e-6;
        const double d = (hermite(n, z + h) - hermite(n, z - h)) / (2 * h);
        CHECK(d == Approx(2.0 * n * hermite(n - 1, z)).epsilon(1e-6).margin(1e-4));
      }
      const auto a = hermite_coefficients(n);
      double poly = 0.0;
      for (std::size_t k = a.size(); k-- > 0;) poly = poly * z + a[k];
      CHECK(poly == Approx(hermite(n, z)).epsilon(1e-10).margin(1e-10));
    }
  }
}

TEST_CASE("Hermite functions are orthonormal", "[meanfield]") {
  const int n = 8;
  const double h = 0.01;
  std::vector<double> gram(n * n, 0.0), phi(n);
  for (double z = -12.0; z <= 12.0; z += h) {
    hermite_functions(z, phi);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gram[a * n + b] += h * phi[a] * phi[b];
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) CHECK(gram[a * n + b] == Approx(a == b ? 1.0 : 0.0).margin(1e-8));
}

TEST_CASE("closed form agrees with the series where it converges", "[meanfield]") {
  for (double P : {-1.2, 0.0, 0.5, 2.0}) {
    for (double Q : {-0.8, 0.3, 1.5}) {
      const auto a = w_sho_closed_form(P, Q, 1.0);
      const auto s = w_sho_series(P, Q, 1.0, 60);
      CHECK(std::abs(a - s) < 1e-8 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("commutation function tends to unity at high temperature", "[meanfield]") {
  for (double P : {-1.0, 0.0, 0.6}) {
    for (double Q : {-0.5, 0.0, 1.1}) {
      const auto w = w_sho_closed_form(P, Q, 1e-6);
      CHECK(std::abs(w - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("commutation function conjugation symmetry", "[meanfield]") {
  for (double b : {0.3, 2.0}) {
    for (double P : {-1.0, 0.4}) {
      for (double Q : {-0.7, 1.3}) {
        const auto w = w_sho_closed_form(P, Q, b);
        CHECK(std::abs(w_sho_closed_form(-P, Q, b) - std::conj(w)) < 1e-12 * std::abs(w) + 1e-14);
        CHECK(std::abs(w_sho_closed_form(P, -Q, b) - std::conj(w)) < 1e-12 * std::abs(w) + 1e-14);
        const auto s = w_sho_series(P, Q, b, 12);
        CHECK(std::abs(w_sho_series(-P, -Q, b, 12) - s) < 1e-12 * std::abs(s) + 1e-14);
      }
    }
  }
}

TEST_CASE("polynomial form reproduces the direct series", "[meanfield]") {
  LocalMode m;
  m.active = true;
  m.omega = 2.0;
  for (double Q : {-1.4, 0.0, 0.9, 6.0}) {
    m.displacement = Q;
    const MomentumPolynomial w = w_sho_polynomial(m, 1.3, 10);
    for (double P : {-2.0, -0.3, 0.0, 1.7}) {
      const auto a = evaluate(w, P);
      const auto b = w_sho_series(P, Q, 1.3, 10);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1e-300, std::abs(b)) + 1e-300);
    }
  }
  m.active = false;
  CHECK_THROWS(w_sho_polynomial(m, 1.0, 6));
}

TEST_CASE("single particle in a pure trap", "[meanfield]") {
  const ModelParams p = trap_only(17.0);
  for (double x : {0.7, -0.2, 1.5}) {
    const Configuration q({x});
    const LocalMode m = locate_minimum(0, q, p);
    CHECK(m.q_bar == Approx(0.0).margin(1e-12));
    CHECK(m.omega == Approx(p.omega));
    CHECK(m.displacement == Approx(std::sqrt(p.omega) * x));
    CHECK(m.excess == Approx(0.5 * p.omega * p.omega * x * x));
    CHECK(m.active == (m.excess < p.u_cut_energy()));
  }
  ModelParams safe = p;
  safe.newton_safeguard = true;
  const LocalMode m = locate_minimum(0, Configuration({0.7}), safe);
  CHECK(m.active);
  CHECK(m.q_bar == Approx(0.0).margin(1e-12));
}

TEST_CASE("cut criteria", "[meanfield]") {
  ModelParams p = trap_only(17.0);
  // Excess of exactly u_cut*hbar*omega at x^2 = 2 u_cut / omega.
  const double x_edge = std::sqrt(2.0 * p.u_cut / p.omega);
  CHECK(locate_minimum(0, Configuration({0.99 * x_edge}), p).active);
  CHECK_FALSE(locate_minimum(0, Configuration({1.01 * x_edge}), p).active);
  p.cut_criterion = CutCriterion::displacement;
  CHECK(locate_minimum(0, Configuration({0.99 * x_edge}), p).active);
  CHECK_FALSE(locate_minimum(0, Configuration({1.01 * x_edge}), p).active);
}

TEST_CASE("interacting chain modes", "[meanfield]") {
  AlgorithmOptions o;
  o.n_particles = 4;
  o.newton_safeguard = true;
  const ModelParams p = build_params(0.16, 0.5, 17.0, o);
  const Configuration q({-1.52, -0.49, 0.51, 1.47});
  const auto modes = locate_minima(q, p);
  REQUIRE(modes.size() == 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const LocalMode& m = modes[j];
    CHECK(m.active);
    CHECK(m.excess >= 0.0);
    CHECK(particle_derivatives_at(j, m.q_bar, q, p).gradient == Approx(0.0).margin(1e-3));
    CHECK(m.omega > p.omega);
    if (j > 0) CHECK(m.q_bar > q[j - 1]);
    if (j < 3) CHECK(m.q_bar < q[j + 1]);
  }
  // Mirror configuration gives mirrored modes.
  const Configuration r({-1.47, -0.51, 0.49, 1.52});
  const auto mirrored = locate_minima(r, p);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(mirrored[3 - j].q_bar == Approx(-modes[j].q_bar).epsilon(1e-9));
    CHECK(mirrored[3 - j].displacement == Approx(-modes[j].displacement).epsilon(1e-9));
  }
}
