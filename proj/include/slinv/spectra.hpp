#pragma once

// Eigenvalues of L_D (y(0) = y(pi) = 0) and L_DN (y(0) = y^[1](pi) = 0),
// norming constants and the regularized spectral data.
//
// Eigenvalues are roots of the continuous Pruefer angle theta(pi, lambda),
// which is strictly increasing in lambda: lambda_k solves theta = k pi and
// mu_k solves theta = (k - 1/2) pi. Roots are taken in increasing order, each
// bracketed from the previous one and refined with TOMS 748. The angle uses
// y^[1](0) = 1, so negative eigenvalues are found too (needed by auto_shift).

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/ode.hpp"
#include "slinv/potential.hpp"
#include "slinv/quadrature.hpp"

namespace slinv {

enum class Flavor { borg, dirichlet };

inline const char* flavor_name(Flavor f) { return f == Flavor::borg ? "borg" : "dirichlet"; }

inline Flavor parse_flavor(const std::string& s) {
  if (s == "borg" || s == "B") return Flavor::borg;
  if (s == "dirichlet" || s == "D") return Flavor::dirichlet;
  throw error(errc::invalid_argument, "unknown flavor '" + s + "'");
}

/// Lower spectral bounds defining the admissible potentials: mu_1 >= 1/4
/// (Borg) and lambda_1 >= 1/2 (Dirichlet).
inline constexpr double eta_borg = 0.25;
inline constexpr double eta_dirichlet = 0.5;

struct EigenData {
  Flavor flavor = Flavor::borg;
  std::size_t n = 0;
  std::vector<double> lambda;  // Dirichlet eigenvalues
  std::vector<double> mu;      // Dirichlet-Neumann eigenvalues (Borg only)
  std::vector<double> alpha;   // norming constants (Dirichlet only)
  std::vector<double> rho;     // 2n entries; odd slots sqrt(mu), even sqrt(lambda)
};

struct RegularizedData {
  Flavor flavor = Flavor::borg;
  std::size_t n = 0;
  std::vector<double> s;  // 2n entries, s[0] = s_1
};

namespace detail {

struct RootTolerance {
  bool operator()(double a, double b) const {
    return std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(a), std::abs(b)) +
                                  1e-14;
  }
};

/// Roots of theta(pi, lambda) = t_j for the increasing targets t_j, each a
/// multiple of pi/2. `labels[j]` is the 1-based eigenvalue index reported on
/// failure.
inline std::vector<double> prufer_roots(const Propagator& prop, std::span<const double> targets,
                                        std::span<const std::size_t> labels) {
  std::vector<double> roots;
  roots.reserve(targets.size());
  constexpr int max_expansions = 80;
  constexpr std::uintmax_t max_iterations = 200;

  double prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const double target = targets[j];
    auto g = [&](double lam) { return prop.prufer_angle(lam) - target; };
    auto fail = [&](const std::string& why) {
      error e(errc::bracket_failure, "eigenvalue index " + std::to_string(labels[j]) + ": " + why);
      e.index = labels[j];
      return e;
    };

    // Lower end: the previous root, or a descending search from the
    // unperturbed guess.
    double lo, g_lo;
    const double rho0 = target / pi;
    if (std::isnan(prev)) {
      lo = rho0 > 0.5 ? (rho0 - 0.5) * (rho0 - 0.5) : 0.0;
      g_lo = g(lo);
      double step = 1.0;
      int it = 0;
      while (g_lo >= 0.0) {
        if (++it > max_expansions) throw fail("no lower bracket");
        lo -= step;
        step *= 2.0;
        g_lo = g(lo);
      }
    } else {
      lo = prev;
      g_lo = g(lo);
      if (g_lo >= 0.0) throw fail("Pruefer angle not increasing");
    }

    // Upper end: half a unit of sqrt(lambda) above the lower end, expanded
    // geometrically.
    const double rl = std::sqrt(std::max(lo, 0.0));
    double hi = std::max((rl + 0.75) * (rl + 0.75), lo + 1.0);
    double g_hi = g(hi);
    double width = hi - lo;
    int it = 0;
    while (g_hi <= 0.0) {
      if (++it > max_expansions) throw fail("no upper bracket");
      lo = hi;
      g_lo = g_hi;
      width *= 2.0;
      hi = lo + width;
      g_hi = g(hi);
    }

    std::uintmax_t iters = max_iterations;
    const auto bracket =
        boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, RootTolerance{}, iters);
    if (iters >= max_iterations) throw fail("root refinement did not converge");
    const double root = 0.5 * (bracket.first + bracket.second);
    roots.push_back(root);
    prev = root;
  }
  return roots;
}

}  // namespace detail

inline std::vector<double> dirichlet_spectrum(const Propagator& prop, std::size_t n) {
  if (n < 1) throw error(errc::invalid_argument, "N must be >= 1");
  std::vector<double> targets(n);
  std::vector<std::size_t> labels(n);
  for (std::size_t k = 1; k <= n; ++k) {
    targets[k - 1] = static_cast<double>(k) * pi;
    labels[k - 1] = k;
  }
  return detail::prufer_roots(prop, targets, labels);
}

inline std::vector<double> dirichlet_neumann_spectrum(const Propagator& prop, std::size_t n) {
  if (n < 1) throw error(errc::invalid_argument, "N must be >= 1");
  std::vector<double> targets(n);
  std::vector<std::size_t> labels(n);
  for (std::size_t k = 1; k <= n; ++k) {
    targets[k - 1] = (static_cast<double>(k) - 0.5) * pi;
    labels[k - 1] = k;
  }
  return detail::prufer_roots(prop, targets, labels);
}

inline std::vector<double> dirichlet_spectrum(const Potential& sigma, std::size_t n) {
  return dirichlet_spectrum(Propagator(sigma), n);
}

inline std::vector<double> dirichlet_neumann_spectrum(const Potential& sigma, std::size_t n) {
  return dirichlet_neumann_spectrum(Propagator(sigma), n);
}

/// Both spectra in one increasing sweep mu_1 < lambda_1 < mu_2 < ...
inline std::pair<std::vector<double>, std::vector<double>> borg_spectra(const Propagator& prop,
                                                                        std::size_t n) {
  if (n < 1) throw error(errc::invalid_argument, "N must be >= 1");
  std::vector<double> targets(2 * n);
  std::vector<std::size_t> labels(2 * n);
  for (std::size_t j = 1; j <= 2 * n; ++j) {
    targets[j - 1] = static_cast<double>(j) * pi / 2.0;
    labels[j - 1] = (j + 1) / 2;
  }
  const auto roots = detail::prufer_roots(prop, targets, labels);
  std::vector<double> lambda(n), mu(n);
  for (std::size_t k = 0; k < n; ++k) {
    mu[k] = roots[2 * k];
    lambda[k] = roots[2 * k + 1];
  }
  return {lambda, mu};
}

/// Strict interlacing mu_1 < lambda_1 < mu_2 < lambda_2 < ...
inline void assert_interlacing(std::span<const double> lambda, std::span<const double> mu) {
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const bool ok = mu[k] < lambda[k] && (k + 1 >= mu.size() || lambda[k] < mu[k + 1]);
    if (!ok) {
      error e(errc::interlacing_violation, "interlacing broken at k = " + std::to_string(k + 1));
      e.index = k + 1;
      throw e;
    }
  }
}

/// alpha_k = int_0^pi s(x, lambda_k)^2 dx with s^[1](0) = sqrt(lambda_k).
inline double norming_constant(const Propagator& prop, double lambda) {
  require_positive(lambda);
  std::vector<double> y, u;
  prop.trajectory(lambda, 0.0, std::sqrt(lambda), y, u);
  const std::size_t n = y.size() - 1;
  std::vector<double> f(y.size());
  for (std::size_t i = 0; i <= n; ++i) f[i] = y[i] * y[i];
  const double df_b = 2.0 * y[n] * prop.derivative(y[n], u[n], n);
  return trapezoid_corrected(f, prop.step(), 0.0, df_b);
}

inline std::vector<double> norming_constants(const Propagator& prop, std::span<const double> lambda) {
  std::vector<double> alpha;
  alpha.reserve(lambda.size());
  for (double l : lambda) alpha.push_back(norming_constant(prop, l));
  return alpha;
}

inline std::vector<double> norming_constants(const Potential& sigma, std::span<const double> lambda) {
  for (double l : lambda) require_positive(l);
  return norming_constants(Propagator(sigma), lambda);
}

inline EigenData eigen_data(const Propagator& prop, Flavor flavor, std::size_t n) {
  EigenData e;
  e.flavor = flavor;
  e.n = n;
  e.rho.assign(2 * n, std::numeric_limits<double>::quiet_NaN());
  if (flavor == Flavor::borg) {
    auto [lambda, mu] = borg_spectra(prop, n);
    assert_interlacing(lambda, mu);
    e.lambda = std::move(lambda);
    e.mu = std::move(mu);
    for (std::size_t k = 0; k < n; ++k) {
      e.rho[2 * k] = std::sqrt(std::max(e.mu[k], 0.0));
      e.rho[2 * k + 1] = std::sqrt(std::max(e.lambda[k], 0.0));
    }
  } else {
    e.lambda = dirichlet_spectrum(prop, n);
    for (double l : e.lambda) require_positive(l);
    e.alpha = norming_constants(prop, e.lambda);
    for (std::size_t k = 0; k < n; ++k) e.rho[2 * k + 1] = std::sqrt(e.lambda[k]);
  }
  return e;
}

inline EigenData eigen_data(const Potential& sigma, Flavor flavor, std::size_t n) {
  return eigen_data(Propagator(sigma), flavor, n);
}

/// s_{2k-1} = sqrt(mu_k) - (k - 1/2), s_{2k} = sqrt(lambda_k) - k (Borg);
/// s_{2k-1} = alpha_k - pi/2, s_{2k} = sqrt(lambda_k) - k (Dirichlet).
inline RegularizedData regularize(const EigenData& e) {
  RegularizedData r;
  r.flavor = e.flavor;
  r.n = e.n;
  r.s.resize(2 * e.n);
  for (std::size_t k = 1; k <= e.n; ++k) {
    const double kd = static_cast<double>(k);
    require_positive(e.lambda[k - 1]);
    r.s[2 * k - 1] = std::sqrt(e.lambda[k - 1]) - kd;
    if (e.flavor == Flavor::borg) {
      require_positive(e.mu[k - 1]);
      r.s[2 * k - 2] = std::sqrt(e.mu[k - 1]) - (kd - 0.5);
    } else {
      r.s[2 * k - 2] = e.alpha[k - 1] - pi / 2.0;
    }
  }
  return r;
}

/// Spectral data implied by regularized data (inverse of regularize).
inline EigenData eigen_from_data(const RegularizedData& r) {
  EigenData e;
  e.flavor = r.flavor;
  e.n = r.n;
  e.lambda.resize(r.n);
  e.rho.assign(2 * r.n, std::numeric_limits<double>::quiet_NaN());
  if (r.flavor == Flavor::borg) e.mu.resize(r.n);
  else e.alpha.resize(r.n);
  for (std::size_t k = 1; k <= r.n; ++k) {
    const double kd = static_cast<double>(k);
    const double rl = r.s[2 * k - 1] + kd;
    e.lambda[k - 1] = rl * rl;
    e.rho[2 * k - 1] = rl;
    if (r.flavor == Flavor::borg) {
      const double rm = r.s[2 * k - 2] + kd - 0.5;
      e.mu[k - 1] = rm * rm;
      e.rho[2 * k - 2] = rm;
    } else {
      e.alpha[k - 1] = r.s[2 * k - 2] + pi / 2.0;
    }
  }
  return e;
}

/// F_B or F_D: the regularized data of sigma truncated at N.
inline RegularizedData forward_map(const Propagator& prop, Flavor flavor, std::size_t n) {
  return regularize(eigen_data(prop, flavor, n));
}

inline RegularizedData forward_map(const Potential& sigma, Flavor flavor, std::size_t n) {
  return forward_map(Propagator(sigma), flavor, n);
}

/// Data of sigma + c (x - pi): every eigenvalue moves by c; with the
/// normalization y^[1](0) = sqrt(lambda) each alpha_k scales by (lambda_k + c) / lambda_k.
inline RegularizedData shift_data(const RegularizedData& s, const EigenData& eigen, double c) {
  const double lowest = s.flavor == Flavor::borg ? eigen.mu.front() : eigen.lambda.front();
  if (!(lowest + c > 0.0)) {
    throw error(errc::shift_too_negative,
                "shift c = " + std::to_string(c) + " makes the lowest eigenvalue non-positive");
  }
  EigenData shifted = eigen;
  for (std::size_t k = 0; k < shifted.lambda.size(); ++k) {
    if (k < shifted.alpha.size()) shifted.alpha[k] *= (shifted.lambda[k] + c) / shifted.lambda[k];
    shifted.lambda[k] += c;
  }
  for (double& m : shifted.mu) m += c;
  return regularize(shifted);
}

/// Lowest eigenvalue that the admissibility bound refers to.
inline double lowest_eigenvalue(const Propagator& prop, Flavor flavor) {
  return flavor == Flavor::borg ? dirichlet_neumann_spectrum(prop, 1).front()
                                : dirichlet_spectrum(prop, 1).front();
}

/// (sigma + c (x - pi), c) with the smallest c >= 0 bringing mu_1 to 1/4
/// (Borg) or lambda_1 to 1/2 (Dirichlet).
inline std::pair<Potential, double> auto_shift(const Potential& sigma, Flavor flavor = Flavor::borg) {
  const double eta = flavor == Flavor::borg ? eta_borg : eta_dirichlet;
  const double low = lowest_eigenvalue(Propagator(sigma), flavor);
  if (low >= eta) return {sigma, 0.0};
  const double c = eta - low;
  return {shift_potential(sigma, c), c};
}

}  // namespace slinv
