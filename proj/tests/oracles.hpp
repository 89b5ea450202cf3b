#pragma once

// Independent reference computations used by the tests: a finite-difference
// matrix eigensolver, Gauss-Kronrod quadrature of analytic integrands, and a
// small deterministic family of smooth potentials.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "slinv/potential.hpp"

namespace oracle {

using slinv::pi;

/// Eigenvalues of -y'' + q y on [0, pi], y(0) = 0 and either y(pi) = 0 or
/// y'(pi) = sigma_pi y(pi), from a second-order three-point scheme on m
/// intervals (ghost point for the Robin end, symmetrized).
inline std::vector<double> fd_eigenvalues_raw(const std::function<double(double)>& q, double sigma_pi,
                                              bool robin, std::size_t count, std::size_t m) {
  const double h = pi / static_cast<double>(m);
  const std::size_t size = robin ? m : m - 1;
  Eigen::VectorXd diag(static_cast<Eigen::Index>(size));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(size - 1));
  for (std::size_t i = 1; i <= size; ++i) {
    diag(static_cast<Eigen::Index>(i - 1)) = 2.0 / (h * h) + q(static_cast<double>(i) * h);
  }
  for (std::size_t i = 0; i + 1 < size; ++i) sub(static_cast<Eigen::Index>(i)) = -1.0 / (h * h);
  if (robin) {
    // Row m: (-2 y_{m-1} + (2 - 2 h sigma_pi) y_m) / h^2 + q_m y_m; the
    // diagonal similarity diag(1, .., 1, 1/sqrt2) symmetrizes it.
    diag(static_cast<Eigen::Index>(size - 1)) = (2.0 - 2.0 * h * sigma_pi) / (h * h) + q(pi);
    sub(static_cast<Eigen::Index>(size - 2)) = -std::sqrt(2.0) / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = es.eigenvalues()(static_cast<Eigen::Index>(k));
  return out;
}

/// Richardson-extrapolated (h^2 -> h^4) finite-difference eigenvalues.
inline std::vector<double> fd_eigenvalues(const std::function<double(double)>& q, double sigma_pi, bool robin,
                                          std::size_t count, std::size_t m = 2000) {
  const auto coarse = fd_eigenvalues_raw(q, sigma_pi, robin, count, m);
  const auto fine = fd_eigenvalues_raw(q, sigma_pi, robin, count, 2 * m);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = (4.0 * fine[k] - coarse[k]) / 3.0;
  return out;
}

/// int_a^b f by adaptive Gauss-Kronrod.
inline double integral(const std::function<double(double)>& f, double a = 0.0, double b = pi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14);
}

/// -(1/pi) int sigma(t) sin(k t) dt.
inline double t_borg_entry(const std::function<double(double)>& sigma, std::size_t k) {
  const double kd = static_cast<double>(k);
  return -integral([&](double t) { return sigma(t) * std::sin(kd * t); }) / pi;
}

/// Entry p of T_D sigma: odd p = 2k-1 -> -int (pi - t) sigma cos(2kt),
/// even p = 2k -> -(1/pi) int sigma sin(2kt).
inline double t_dirichlet_entry(const std::function<double(double)>& sigma, std::size_t p) {
  const double w = 2.0 * static_cast<double>((p + 1) / 2);
  if (p % 2 == 1) return -integral([&](double t) { return (pi - t) * sigma(t) * std::cos(w * t); });
  return -integral([&](double t) { return sigma(t) * std::sin(w * t); }) / pi;
}

/// A smooth sine-series potential: sum_{j<=terms} a_j sin(j x) + b (x - pi),
/// a_j ~ U(-1, 1) amp / j^2, b ~ U(-1, 1) amp / 4.
struct SmoothFamily {
  std::vector<double> a;
  double b = 0.0;

  double operator()(double x) const {
    double v = b * (x - pi);
    for (std::size_t j = 1; j <= a.size(); ++j) v += a[j - 1] * std::sin(static_cast<double>(j) * x);
    return v;
  }
  double derivative(double x) const {
    double v = b;
    for (std::size_t j = 1; j <= a.size(); ++j) {
      v += static_cast<double>(j) * a[j - 1] * std::cos(static_cast<double>(j) * x);
    }
    return v;
  }
};

inline SmoothFamily smooth_member(unsigned seed, double amp, std::size_t terms = 6) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SmoothFamily f;
  f.a.resize(terms);
  for (std::size_t j = 1; j <= terms; ++j) f.a[j - 1] = u(rng) * amp / static_cast<double>(j * j);
  f.b = u(rng) * amp / 4.0;
  return f;
}

inline double sup_diff(const slinv::Potential& a, const slinv::Potential& b) {
  double m = 0.0;
  for (std::size_t i = 0; i <= a.n_grid(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
