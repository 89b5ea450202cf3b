#pragma once

// Reconstruction of sigma from regularized data and the closed-form
// one-parameter transforms that move a single Dirichlet eigenvalue or norming
// constant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/linearized.hpp"
#include "slinv/ode.hpp"
#include "slinv/potential.hpp"
#include "slinv/quadrature.hpp"
#include "slinv/seqspace.hpp"
#include "slinv/spectra.hpp"

namespace slinv {

struct ReconstructOptions {
  double tol = 1e-7;
  std::size_t max_iter = 200;
  double h_min = 1e-6;
  std::size_t n_grid = default_grid;
  double stall_ratio = 0.9;  // Newton step when residual_new > stall_ratio * residual_old
  bool auto_shift = true;
};

struct ReconstructionResult {
  Potential sigma = Potential::zero(min_grid);
  std::size_t iterations = 0;  // forward evaluations, including the initial one
  double residual_norm = 0.0;
  bool converged = false;
  double shift_used = 0.0;
  std::size_t newton_steps = 0;
  std::vector<double> residual_trace;
};

/// sigma_1 = sigma_0 + sum_k (target_k - F(sigma_0)_k) psi_k / scale_k.
inline Potential reconstruct_via_basis_step(const Potential& sigma0, const EigenData& eigen0,
                                            const BasisFunctions& basis0, const RegularizedData& target) {
  const RegularizedData current = regularize(eigen0);
  if (target.s.size() != current.s.size()) throw error(errc::invalid_argument, "truncation mismatch");
  std::vector<double> r(target.s.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = target.s[k] - current.s[k];
  Potential out = sigma0 + inverse_derivative_apply(basis0, r, sigma0.theta());
  return target.flavor == Flavor::dirichlet ? remove_mean(out) : out;
}

namespace detail {

inline double residual_norm(const std::vector<double>& r, double theta, Flavor flavor) {
  return data_norm(r, theta, flavor);
}

inline RegularizedData admissible_target(const RegularizedData& target, double theta, const ReconstructOptions& opts,
                                         double& shift) {
  constexpr double huge_radius = std::numeric_limits<double>::max();
  shift = 0.0;
  auto diag = omega_membership(target, huge_radius, opts.h_min, theta);
  if (diag.member) return target;
  if (!diag.lower_ok && opts.auto_shift) {
    const EigenData e = eigen_from_data(target);
    const double eta = target.flavor == Flavor::borg ? eta_borg : eta_dirichlet;
    const double low = target.flavor == Flavor::borg ? e.mu.front() : e.lambda.front();
    shift = eta + 0.5 - low;
    RegularizedData shifted = shift_data(target, e, shift);
    shifted.n = target.n;
    diag = omega_membership(shifted, huge_radius, opts.h_min, theta);
    if (diag.member) return shifted;
  }
  throw error(errc::omega_violation, "target outside Omega (" + diag.reason + ", h* = " +
                                         std::to_string(diag.h_star) + ")");
}

}  // namespace detail

inline constexpr std::size_t max_step_halvings = 12;

/// T-split fixed point sigma <- sigma + T^{-1}(target - F(sigma)) with a
/// basis (Newton) step whenever the residual stalls. A step whose forward
/// solve fails (an iterate leaving the admissible class) is halved.
inline ReconstructionResult reconstruct(const RegularizedData& target, double theta,
                                        const ReconstructOptions& opts = {}) {
  if (target.s.size() != 2 * target.n || target.n == 0) throw error(errc::invalid_argument, "bad data length");
  double shift = 0.0;
  const RegularizedData goal = detail::admissible_target(target, theta, opts, shift);
  const Flavor flavor = goal.flavor;
  const std::size_t n = goal.n;

  ReconstructionResult res;
  res.shift_used = shift;
  Potential sigma = Potential::zero(opts.n_grid, theta);
  EigenData eigen = eigen_data(sigma, flavor, n);
  double previous = std::numeric_limits<double>::infinity();
  std::vector<double> r(2 * n);

  auto fail = [&](const std::string& why, std::size_t it, double residual) {
    error e(errc::no_convergence, why);
    e.iterations = it;
    e.residual = residual;
    return e;
  };

  for (std::size_t it = 0;; ++it) {
    const RegularizedData current = regularize(eigen);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = goal.s[k] - current.s[k];
    const double norm = detail::residual_norm(r, theta, flavor);
    res.residual_trace.push_back(norm);
    res.iterations = it + 1;
    if (norm <= opts.tol) {
      res.converged = true;
      res.residual_norm = norm;
      break;
    }
    if (it >= opts.max_iter) throw fail("no convergence after " + std::to_string(it) + " iterations", it, norm);

    Potential step = Potential::zero(opts.n_grid, theta);
    if (norm > opts.stall_ratio * previous) {
      const BasisFunctions basis = build_basis(sigma, eigen, flavor);
      step = reconstruct_via_basis_step(sigma, eigen, basis, goal) - sigma;
      ++res.newton_steps;
    } else {
      step = t_inverse_raw(r, theta, flavor, opts.n_grid).with_theta(theta);
    }
    bool accepted = false;
    std::string last_error;
    for (std::size_t halving = 0; halving <= max_step_halvings && !accepted; ++halving) {
      Potential trial = sigma + std::ldexp(1.0, -static_cast<int>(halving)) * step;
      if (flavor == Flavor::dirichlet) trial = remove_mean(trial);
      try {
        EigenData e = eigen_data(trial, flavor, n);
        (void)regularize(e);
        sigma = std::move(trial);
        eigen = std::move(e);
        accepted = true;
      } catch (const error& e) {
        last_error = e.what();
      }
    }
    if (!accepted) throw fail("forward solve failed: " + last_error, it, norm);
    previous = norm;
  }

  if (shift != 0.0) sigma = shift_potential(sigma, -shift);
  if (flavor == Flavor::dirichlet) sigma = remove_mean(sigma);
  res.sigma = sigma.with_theta(theta);
  return res;
}

// ---------------------------------------------------------------------------
// Isospectral transforms. sigma_new = sigma - 2 G'/G with
//   eigenvalue move: G = (1 + A)(1 - B) + C^2,
//     A = alpha^-1 int_0^x y_t^2, B = alpha^-1 int_0^x y_0^2, C = alpha^-1 int_0^x y_t y_0,
//     y_0 = y(., lambda_n), y_t = y(., lambda_n + t), y^[1](0) = sqrt(lambda);
//   norming move: G = 1 + ((alpha + t)^-1 - alpha^-1) int_0^x y_0^2.

inline constexpr double g_floor = 1e-10;

namespace detail {

struct Profile {
  std::vector<double> y, dy;
};

inline Profile dirichlet_profile(const Propagator& prop, double lambda) {
  std::vector<double> y, u;
  prop.trajectory(lambda, 0.0, std::sqrt(lambda), y, u);
  Profile p{y, std::vector<double>(y.size())};
  for (std::size_t i = 0; i < y.size(); ++i) p.dy[i] = prop.derivative(y[i], u[i], i);
  return p;
}

inline std::vector<double> cumulative_product(const Profile& a, const Profile& b, double h) {
  std::vector<double> f(a.y.size()), df(a.y.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = a.y[i] * b.y[i];
    df[i] = a.dy[i] * b.y[i] + a.y[i] * b.dy[i];
  }
  return cumulative_hermite(f, df, h);
}

inline Potential apply_log_derivative(const Potential& sigma, const std::vector<double>& g,
                                      const std::vector<double>& dg) {
  const double gmin = *std::min_element(g.begin(), g.end());
  if (!(gmin > g_floor)) {
    throw error(errc::g_non_positive, "G reaches " + std::to_string(gmin));
  }
  std::vector<double> s(sigma.samples().begin(), sigma.samples().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= 2.0 * dg[i] / g[i];
  return Potential(std::move(s), sigma.theta());
}

inline double norming_of(const Propagator& prop, const EigenData& eigen, std::size_t n) {
  if (eigen.alpha.size() >= n) return eigen.alpha[n - 1];
  return norming_constant(prop, eigen.lambda[n - 1]);
}

}  // namespace detail

/// Moves lambda_n to lambda_n + t keeping every other Dirichlet eigenvalue
/// and every norming constant.
inline Potential perturb_eigenvalue(const Potential& sigma, const EigenData& eigen, std::size_t n, double t) {
  if (n < 1 || n > eigen.lambda.size()) throw error(errc::invalid_argument, "n out of range");
  const Propagator prop(sigma);
  const double ln = eigen.lambda[n - 1];
  const double lower = n == 1 ? -ln : eigen.lambda[n - 2] - ln;
  const double next = n < eigen.lambda.size() ? eigen.lambda[n] : dirichlet_spectrum(prop, n + 1).back();
  const double upper = next - ln;
  if (!(t > lower && t < upper)) {
    throw error(errc::t_out_of_range, "t = " + std::to_string(t) + " outside (" + std::to_string(lower) + ", " +
                                          std::to_string(upper) + ")");
  }
  if (t == 0.0) return sigma;
  const double alpha = detail::norming_of(prop, eigen, n);
  const double h = sigma.step();
  const auto y0 = detail::dirichlet_profile(prop, ln);
  const auto yt = detail::dirichlet_profile(prop, ln + t);
  const auto a = detail::cumulative_product(yt, yt, h);
  const auto b = detail::cumulative_product(y0, y0, h);
  const auto c = detail::cumulative_product(yt, y0, h);
  std::vector<double> g(a.size()), dg(a.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ai = a[i] / alpha, bi = b[i] / alpha, ci = c[i] / alpha;
    g[i] = (1.0 + ai) * (1.0 - bi) + ci * ci;
    dg[i] = (yt.y[i] * yt.y[i] * (1.0 - bi) - (1.0 + ai) * y0.y[i] * y0.y[i] + 2.0 * ci * yt.y[i] * y0.y[i]) / alpha;
  }
  return detail::apply_log_derivative(sigma, g, dg);
}

/// Moves alpha_n to alpha_n + t keeping the Dirichlet spectrum and every other
/// norming constant.
inline Potential perturb_norming(const Potential& sigma, const EigenData& eigen, std::size_t n, double t) {
  if (n < 1 || n > eigen.lambda.size()) throw error(errc::invalid_argument, "n out of range");
  const Propagator prop(sigma);
  const double alpha = detail::norming_of(prop, eigen, n);
  if (!(t > -alpha)) {
    throw error(errc::t_out_of_range, "t = " + std::to_string(t) + " must exceed -alpha_n = " + std::to_string(-alpha));
  }
  if (t == 0.0) return sigma;
  const auto y0 = detail::dirichlet_profile(prop, eigen.lambda[n - 1]);
  const auto b = detail::cumulative_product(y0, y0, sigma.step());
  const double coef = 1.0 / (alpha + t) - 1.0 / alpha;
  std::vector<double> g(b.size()), dg(b.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = 1.0 + coef * b[i];
    dg[i] = coef * y0.y[i] * y0.y[i];
  }
  return detail::apply_log_derivative(sigma, g, dg);
}

// ---------------------------------------------------------------------------
// build-from-data: Dirichlet data are reached exactly by moving one datum at a
// time from sigma = 0; Borg data go through reconstruct.

struct BuildConfig {
  Flavor flavor = Flavor::dirichlet;
  double theta = 1.0;
  std::vector<double> s;
  std::size_t n = 0;
  double tol = 1e-7;
  std::size_t max_iter = 200;
  std::size_t n_grid = default_grid;
};

struct BuildResult {
  Potential sigma = Potential::zero(min_grid);
  std::size_t moves = 0;
  double residual_norm = 0.0;
  std::string method;
};

inline BuildResult build_from_data(const BuildConfig& cfg) {
  if (cfg.s.size() != 2 * cfg.n || cfg.n == 0) throw error(errc::invalid_argument, "s must hold 2N entries");
  RegularizedData target{cfg.flavor, cfg.n, cfg.s};
  BuildResult out;
  if (cfg.flavor == Flavor::borg) {
    ReconstructOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.n_grid = cfg.n_grid;
    auto r = reconstruct(target, cfg.theta, opts);
    out.sigma = r.sigma;
    out.moves = r.iterations;
    out.residual_norm = r.residual_norm;
    out.method = "reconstruct";
    return out;
  }

  const EigenData want = eigen_from_data(target);
  for (double l : want.lambda) require_positive(l);
  for (std::size_t k = 1; k < want.lambda.size(); ++k) {
    if (!(want.lambda[k] > want.lambda[k - 1])) throw error(errc::invalid_argument, "eigenvalues must increase");
  }
  for (double a : want.alpha) {
    if (!(a > 0.0)) throw error(errc::invalid_argument, "norming constants must be positive");
  }

  Potential sigma = Potential::zero(cfg.n_grid, cfg.theta);
  const std::size_t n = cfg.n;
  constexpr std::size_t max_passes = 64;
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    bool done = true;
    for (std::size_t k = 1; k <= n; ++k) {
      const EigenData cur = eigen_data(sigma, Flavor::dirichlet, n + 1);
      const double goal = want.lambda[k - 1];
      const double now = cur.lambda[k - 1];
      if (std::abs(goal - now) <= 1e-12 * (1.0 + goal)) continue;
      const double lo = k == 1 ? 0.0 : cur.lambda[k - 2];
      const double hi = cur.lambda[k];
      double next = goal;
      if (!(goal > lo && goal < hi)) {
        next = goal > now ? 0.5 * (now + hi) : 0.5 * (now + lo);
        done = false;
      }
      sigma = perturb_eigenvalue(sigma, cur, k, next - now);
      ++out.moves;
    }
    if (done) break;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    const EigenData cur = eigen_data(sigma, Flavor::dirichlet, n);
    sigma = perturb_norming(sigma, cur, k, want.alpha[k - 1] - cur.alpha[k - 1]);
    ++out.moves;
  }
  sigma = remove_mean(sigma);
  const auto got = forward_map(sigma, Flavor::dirichlet, n);
  std::vector<double> r(2 * n);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = cfg.s[k] - got.s[k];
  out.residual_norm = data_norm(r, cfg.theta, Flavor::dirichlet);
  out.sigma = sigma.with_theta(cfg.theta);
  out.method = "isospectral moves";
  return out;
}

}  // namespace slinv
