#include "qpsmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "qpsmc/errors.hpp"

namespace qpsmc {

double sho_exact_energy(double beta, double omega) {
  if (!(beta > 0.0) || !(omega > 0.0)) throw ParameterError("sho_exact_energy: beta, omega > 0");
  const double x = beta * omega;
  // Sum in units of the ground-state Boltzmann factor.
  double z = 0.0, e = 0.0;
  for (long n = 0;; ++n) {
    const double w = std::exp(-x * n);
    z += w;
    e += w * omega * (n + 0.5);
    if (w < 1e-17 * z || n > 100000000) break;
  }
  return e / z;
}

namespace {

// Lowest eigenvalues of -1/(2 mass) d^2/dx^2 + V on x_i = x0 + i h, Dirichlet walls.
std::vector<double> tridiagonal_levels(double x0, double x1, double h, double mass,
                                       const std::function<double(double)>& v) {
  const auto n = static_cast<Eigen::Index>(std::floor((x1 - x0) / h)) - 1;
  if (n < 3) throw ParameterError("grid_diagonalize: grid too small");
  const double t = 1.0 / (2.0 * mass * h * h);
  Eigen::VectorXd diag(n), sub(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = 2.0 * t + v(x0 + (i + 1) * h);
  sub.setConstant(-t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// Richardson extrapolation of the O(h^2) error from spacings h and h/2.
std::vector<double> extrapolated_levels(double x0, double x1, double h, double mass,
                                        const std::function<double(double)>& v,
                                        double* ground_shift) {
  const auto coarse = tridiagonal_levels(x0, x1, h, mass, v);
  const auto fine = tridiagonal_levels(x0, x1, 0.5 * h, mass, v);
  const std::size_t n = std::min(coarse.size(), fine.size());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  if (ground_shift) *ground_shift = std::abs(fine[0] - coarse[0]);
  return out;
}

} // namespace

EigenSpectrum grid_diagonalize(const ModelParams& p, const GridSpec& g) {
  if (p.n_particles < 1 || p.n_particles > 2) {
    throw ParameterError("grid_diagonalize: only N = 1 or 2 is supported");
  }
  if (!(g.spacing > 0.0) || !(g.extent > 0.0)) throw ParameterError("grid_diagonalize: bad grid");
  const double w2 = p.omega * p.omega;

  EigenSpectrum spec;
  double shift = 0.0;
  if (p.n_particles == 1) {
    spec.levels = extrapolated_levels(-g.extent, g.extent, g.spacing, 1.0,
                                      [&](double x) { return 0.5 * w2 * x * x; }, &shift);
  } else {
    double shift_com = 0.0, shift_rel = 0.0;
    const auto com = extrapolated_levels(-g.extent, g.extent, g.spacing, 2.0,
                                         [&](double x) { return w2 * x * x; }, &shift_com);
    if (!(g.r_min > 0.0) || g.r_min >= g.extent) throw ParameterError("grid_diagonalize: bad r_min");
    const auto rel = extrapolated_levels(
        g.r_min, g.extent, g.spacing, 0.5,
        [&](double r) {
          double u = 0.25 * w2 * r * r;
          if (!p.lj_rcut || r < *p.lj_rcut) u += lj_pair(r, p.epsilon);
          return u;
        },
        &shift_rel);
    shift = shift_com + shift_rel;
    // All sums E_com + E_rel; keep the lowest n_levels.
    const double e0 = com.front() + rel.front();
    std::vector<double> sums;
    const std::size_t want = g.n_levels;
    // Upper bound: the want-th lowest sum is at most e0 + (want-th spacing) on either ladder.
    const double cap_com = com[std::min(want, com.size()) - 1] - com.front();
    const double cap_rel = rel[std::min(want, rel.size()) - 1] - rel.front();
    const double cap = e0 + std::min(cap_com, cap_rel);
    for (double a : com) {
      if (a + rel.front() > cap) break;
      for (double b : rel) {
        if (a + b > cap) break;
        sums.push_back(a + b);
      }
    }
    std::sort(sums.begin(), sums.end());
    spec.levels = std::move(sums);
  }
  if (g.tolerance > 0.0 && shift > g.tolerance) {
    std::ostringstream msg;
    msg << "grid_diagonalize: ground state moved by " << shift
        << " under grid halving (tolerance " << g.tolerance << ")";
    throw RefinementError(msg.str());
  }
  if (spec.levels.size() > g.n_levels) spec.levels.resize(g.n_levels);
  return spec;
}

CanonicalAverage canonical_average(const EigenSpectrum& spec, double beta, double shift) {
  if (spec.levels.empty()) throw ParameterError("canonical_average: empty spectrum");
  if (!(beta > 0.0)) throw ParameterError("canonical_average: beta must be positive");
  const double e0 = spec.levels.front();
  double z = 0.0, e = 0.0;
  for (double level : spec.levels) {
    const double w = std::exp(-beta * (level - e0));
    z += w;
    e += w * (level + shift);
  }
  CanonicalAverage out;
  out.energy = e / z;
  out.truncation_warning = std::exp(-beta * (spec.levels.back() - e0)) >= 1e-6;
  return out;
}

SpectrumFile read_spectrum(std::istream& in) {
  SpectrumFile out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("units:");
      if (pos != std::string::npos) {
        std::istringstream ss(line.substr(pos + 6));
        ss >> out.units;
      }
      continue;
    }
    std::istringstream ss(line);
    double v = 0.0;
    std::string rest;
    if (!(ss >> v) || (ss >> rest) || !std::isfinite(v)) {
      throw ParameterError("spectrum line " + std::to_string(line_no) + ": expected one number");
    }
    out.spectrum.levels.push_back(v);
  }
  std::sort(out.spectrum.levels.begin(), out.spectrum.levels.end());
  return out;
}

SpectrumFile read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open spectrum file '" + path + "'");
  return read_spectrum(in);
}

void write_spectrum(std::ostream& out, const EigenSpectrum& spec, const std::string& units) {
  out << "# units: " << units << '\n';
  out.precision(17);
  for (double v : spec.levels) out << v << '\n';
}

} // namespace qpsmc
