#include "qpsmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "qpsmc/errors.hpp"

namespace qpsmc {

std::string to_string(Statistics s) {
  return s == Statistics::boson ? "boson" : "fermion";
}

std::string to_string(QuadratureRoute r) {
  switch (r) {
  case QuadratureRoute::monomial: return "monomial";
  case QuadratureRoute::hermite: return "hermite";
  case QuadratureRoute::mehler: return "mehler";
  }
  return "?";
}

std::string to_string(CutCriterion c) {
  return c == CutCriterion::energy ? "energy" : "displacement";
}

std::string to_string(DimerRule r) { return r == DimerRule::coupled ? "coupled" : "classical"; }

Statistics statistics_from_string(const std::string& s) {
  if (s == "boson") return Statistics::boson;
  if (s == "fermion") return Statistics::fermion;
  throw ParameterError("statistics must be 'boson' or 'fermion', got '" + s + "'");
}

QuadratureRoute quadrature_from_string(const std::string& s) {
  if (s == "monomial") return QuadratureRoute::monomial;
  if (s == "hermite") return QuadratureRoute::hermite;
  if (s == "mehler") return QuadratureRoute::mehler;
  throw ParameterError("quadrature must be monomial, hermite or mehler, got '" + s + "'");
}

CutCriterion cut_criterion_from_string(const std::string& s) {
  if (s == "energy") return CutCriterion::energy;
  if (s == "displacement") return CutCriterion::displacement;
  throw ParameterError("cut_criterion must be energy or displacement, got '" + s + "'");
}

DimerRule dimer_rule_from_string(const std::string& s) {
  if (s == "coupled") return DimerRule::coupled;
  if (s == "classical") return DimerRule::classical;
  throw ParameterError("dimer_rule must be coupled or classical, got '" + s + "'");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

double default_u_cut(double beta_lj) { return beta_lj < 2.0 ? 2.0 : 5.0; }

} // namespace

ModelParams build_params(double de_boer, double trap_ratio, double beta_lj,
                         const AlgorithmOptions& o) {
  require(std::isfinite(de_boer) && de_boer > 0.0, "de_boer must be positive");
  require(std::isfinite(trap_ratio) && trap_ratio > 0.0, "trap_ratio must be positive");
  require(std::isfinite(beta_lj) && beta_lj > 0.0, "beta_lj must be positive");
  require(o.n_particles >= 1, "n_particles must be >= 1");
  require(o.dimension == 1, "dimension: only d = 1 is implemented");
  require(o.hermite_order >= 0, "hermite_order must be >= 0");
  require(o.newton_iters >= 1, "newton_iters must be >= 1");
  require(!o.u_cut || (std::isfinite(*o.u_cut) && *o.u_cut > 0.0), "u_cut must be positive");
  require(o.sym_order >= 1 && o.sym_order <= 3, "sym_order must be 1, 2 or 3");
  require(!o.lj_rcut || *o.lj_rcut > 0.0, "lj_rcut must be positive");
  require(!o.dimer_cut || (*o.dimer_cut >= 0.0 && *o.dimer_cut < 1.0),
          "dimer_cut must lie in [0, 1)");

  ModelParams p;
  p.n_particles = o.n_particles;
  p.dimension = o.dimension;
  p.de_boer = de_boer;
  p.trap_ratio = trap_ratio;
  p.hermite_order = o.hermite_order;
  p.newton_iters = o.newton_iters;
  p.newton_safeguard = o.newton_safeguard;
  p.sym_order = o.sym_order;
  p.statistics = o.statistics;
  p.lj_rcut = o.lj_rcut;
  p.commutation = o.commutation;
  p.quadrature = o.quadrature;
  p.cut_criterion = o.cut_criterion;
  p.dimer_rule = o.dimer_rule;
  p.dimer_cut = o.dimer_cut;

  // L_dB = 2^{1/6}/sqrt(eps) and trap_ratio = omega/sqrt(eps) with hbar=m=r_e=1.
  p.epsilon = std::cbrt(2.0) / (de_boer * de_boer);
  p.omega = trap_ratio * std::sqrt(p.epsilon);
  p.omega_lj = std::sqrt(72.0 * p.epsilon);
  return with_beta_lj(p, beta_lj, o.u_cut);
}

ModelParams with_beta_lj(const ModelParams& base, double beta_lj,
                         std::optional<double> explicit_u_cut) {
  require(std::isfinite(beta_lj) && beta_lj > 0.0, "beta_lj must be positive");
  ModelParams p = base;
  p.beta_lj = beta_lj;
  p.beta = beta_lj / p.omega_lj;
  p.lambda_th = std::sqrt(2.0 * std::numbers::pi * p.beta);
  p.u_cut = explicit_u_cut ? *explicit_u_cut : default_u_cut(beta_lj);
  return p;
}

double beta_lj_from_trap_units(double beta_hbar_omega, double trap_ratio) {
  return beta_hbar_omega * std::sqrt(72.0) / trap_ratio;
}

Configuration::Configuration(std::vector<double> positions) : q_(std::move(positions)) {
  for (double x : q_) {
    if (!std::isfinite(x)) throw ParameterError("configuration has a non-finite position");
  }
  std::sort(q_.begin(), q_.end());
  for (std::size_t j = 1; j < q_.size(); ++j) {
    if (q_[j] - q_[j - 1] < kCoincidence) {
      throw SingularConfiguration("particles " + std::to_string(j - 1) + " and " +
                                  std::to_string(j) + " coincide");
    }
  }
}

std::size_t Configuration::move(std::size_t j, double x) {
  q_[j] = x;
  while (j > 0 && q_[j - 1] > q_[j]) {
    std::swap(q_[j - 1], q_[j]);
    --j;
  }
  while (j + 1 < q_.size() && q_[j + 1] < q_[j]) {
    std::swap(q_[j + 1], q_[j]);
    ++j;
  }
  return j;
}

double lj_pair(double r, double epsilon) {
  const double s6 = 1.0 / std::pow(r * r, 3);
  return epsilon * (s6 * s6 - 2.0 * s6);
}

double lj_pair_d1(double r, double epsilon) {
  const double s6 = 1.0 / std::pow(r * r, 3);
  return epsilon * (-12.0 * s6 * s6 + 12.0 * s6) / r;
}

double lj_pair_d2(double r, double epsilon) {
  const double s6 = 1.0 / std::pow(r * r, 3);
  return epsilon * (156.0 * s6 * s6 - 84.0 * s6) / (r * r);
}

PairField pair_field(const Configuration& q, std::size_t j, double x, const ModelParams& p) {
  PairField f;
  const auto add = [&](double qk) -> bool {
    const double r = x - qk;
    const double ar = std::abs(r);
    if (ar < kCoincidence) {
      f.u = std::numeric_limits<double>::infinity();
      f.du = std::numeric_limits<double>::quiet_NaN();
      f.d2u = std::numeric_limits<double>::quiet_NaN();
      return false;
    }
    // u depends on |r|; d/dx carries the sign of r.
    f.u += lj_pair(ar, p.epsilon);
    f.du += r < 0.0 ? -lj_pair_d1(ar, p.epsilon) : lj_pair_d1(ar, p.epsilon);
    f.d2u += lj_pair_d2(ar, p.epsilon);
    return true;
  };

  const std::size_t n = q.size();
  if (!p.lj_rcut) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j && !add(q[k])) return f;
    }
    return f;
  }
  // Sorted window: walk outward until partners are beyond the cut-off.
  const double rc = *p.lj_rcut;
  for (std::size_t k = j; k-- > 0;) {
    if (x - q[k] >= rc) break;
    if (std::abs(x - q[k]) < rc && !add(q[k])) return f;
  }
  for (std::size_t k = j + 1; k < n; ++k) {
    if (q[k] - x >= rc) break;
    if (std::abs(x - q[k]) < rc && !add(q[k])) return f;
  }
  return f;
}

double trap_energy(double x, const ModelParams& p) { return 0.5 * p.omega * p.omega * x * x; }

double potential_total(const Configuration& q, const ModelParams& p) {
  double u = 0.0;
  const std::size_t n = q.size();
  for (std::size_t j = 0; j < n; ++j) {
    u += trap_energy(q[j], p);
    for (std::size_t k = j + 1; k < n; ++k) {
      const double r = q[k] - q[j];
      if (p.lj_rcut && r >= *p.lj_rcut) {
        break; // sorted
      }
      u += lj_pair(r, p.epsilon);
    }
  }
  return u;
}

double particle_energy_at(std::size_t j, double x, const Configuration& q, const ModelParams& p) {
  return trap_energy(x, p) + 0.5 * pair_field(q, j, x, p).u;
}

double particle_energy(std::size_t j, const Configuration& q, const ModelParams& p) {
  return particle_energy_at(j, q[j], q, p);
}

ParticleDerivatives particle_derivatives_at(std::size_t j, double x, const Configuration& q,
                                            const ModelParams& p) {
  const PairField f = pair_field(q, j, x, p);
  const double w2 = p.omega * p.omega;
  return {w2 * x + 0.5 * f.du, w2 + 0.5 * f.d2u};
}

ParticleDerivatives particle_derivatives(std::size_t j, const Configuration& q,
                                         const ModelParams& p) {
  if (j >= q.size()) throw ParameterError("particle index out of range");
  return particle_derivatives_at(j, q[j], q, p);
}

double potential_minimum(const ModelParams& p) {
  const int n = p.n_particles;
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) x[j] = (j - 0.5 * (n - 1));

  const auto energy = [&](const Eigen::VectorXd& v) {
    double u = 0.0;
    for (int j = 0; j < n; ++j) {
      u += trap_energy(v[j], p);
      for (int k = j + 1; k < n; ++k) {
        const double r = std::abs(v[k] - v[j]);
        if (r < kCoincidence) return std::numeric_limits<double>::infinity();
        if (!p.lj_rcut || r < *p.lj_rcut) u += lj_pair(r, p.epsilon);
      }
    }
    return u;
  };

  double u = energy(x);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      g[j] += p.omega * p.omega * x[j];
      h(j, j) += p.omega * p.omega;
      for (int k = j + 1; k < n; ++k) {
        const double r = x[k] - x[j];
        const double ar = std::abs(r);
        if (p.lj_rcut && ar >= *p.lj_rcut) continue;
        const double d1 = r < 0.0 ? -lj_pair_d1(ar, p.epsilon) : lj_pair_d1(ar, p.epsilon);
        const double d2 = lj_pair_d2(ar, p.epsilon);
        g[k] += d1;
        g[j] -= d1;
        h(j, j) += d2;
        h(k, k) += d2;
        h(j, k) -= d2;
        h(k, j) -= d2;
      }
    }
    if (g.norm() < 1e-12 * std::max(1.0, std::abs(u))) break;
    Eigen::VectorXd step = -h.ldlt().solve(g);
    if (!step.allFinite() || step.dot(g) >= 0.0) step = -g / h.diagonal().maxCoeff();
    double t = 1.0;
    while (t > 1e-12) {
      const Eigen::VectorXd trial = x + t * step;
      const double ut = energy(trial);
      if (ut <= u) {
        x = trial;
        u = ut;
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-12) break;
  }
  return u;
}

} // namespace qpsmc
