#pragma once

// The linear maps
//   (T_B s)_k      = -(1/pi) int sigma(t) sin(kt) dt,
//   (T_D s)_{2k-1} = -int (pi - t) sigma(t) cos(2kt) dt,
//   (T_D s)_{2k}   = -(1/pi) int sigma(t) sin(2kt) dt,
// their inverses on l^theta_B / l^theta_D, and the biorthogonal systems that
// represent the Frechet derivative of F and of its inverse at a potential.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/ode.hpp"
#include "slinv/potential.hpp"
#include "slinv/quadrature.hpp"
#include "slinv/seqspace.hpp"
#include "slinv/spectra.hpp"

namespace slinv {

namespace detail {

/// int_0^pi a(t) trig(omega t) dt for integer omega, trig = sin or cos, by the
/// trapezoid rule with Euler-Maclaurin corrections through h^6. Endpoint
/// derivatives of `a` come from one-sided differences; the fifth derivative of
/// `a` is neglected.
inline double em_trig_integral(std::span<const double> a, const EndpointDerivatives& d, double h,
                               double omega, bool use_sin) {
  const std::size_t n = a.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) * h;
    const double t = use_sin ? std::sin(omega * x) : std::cos(omega * x);
    acc += (i == 0 || i == n) ? 0.5 * a[i] * t : a[i] * t;
  }
  acc *= h;
  const double c_pi = std::cos(omega * pi);  // (-1)^omega
  const double w2 = omega * omega;
  // Odd derivatives of f = a * trig at 0 and pi.
  double f1a, f1b, f3a, f3b, f5a, f5b;
  if (use_sin) {
    f1a = omega * a.front();
    f1b = c_pi * omega * a.back();
    f3a = 3.0 * omega * d.left[2] - w2 * omega * a.front();
    f3b = c_pi * (3.0 * omega * d.right[2] - w2 * omega * a.back());
    f5a = -10.0 * w2 * omega * d.left[2] + w2 * w2 * omega * a.front();
    f5b = c_pi * (-10.0 * w2 * omega * d.right[2] + w2 * w2 * omega * a.back());
  } else {
    f1a = d.left[1];
    f1b = c_pi * d.right[1];
    f3a = d.left[3] - 3.0 * w2 * d.left[1];
    f3b = c_pi * (d.right[3] - 3.0 * w2 * d.right[1]);
    f5a = -10.0 * w2 * d.left[3] + 5.0 * w2 * w2 * d.left[1];
    f5b = c_pi * (-10.0 * w2 * d.right[3] + 5.0 * w2 * w2 * d.right[1]);
  }
  const double h2 = h * h;
  return acc - h2 / 12.0 * (f1b - f1a) + h2 * h2 / 720.0 * (f3b - f3a) -
         h2 * h2 * h2 / 30240.0 * (f5b - f5a);
}

}  // namespace detail

/// First 2N coefficients of T_B sigma.
inline std::vector<double> t_borg(const Potential& sigma, std::size_t n) {
  const auto s = sigma.samples();
  const EndpointDerivatives d = endpoint_derivatives(s, sigma.step());
  std::vector<double> out(2 * n);
  for (std::size_t k = 1; k <= 2 * n; ++k) {
    out[k - 1] = -detail::em_trig_integral(s, d, sigma.step(), static_cast<double>(k), true) / pi;
  }
  return out;
}

/// First 2N coefficients of T_D sigma.
inline std::vector<double> t_dirichlet(const Potential& sigma, std::size_t n) {
  const auto s = sigma.samples();
  const double h = sigma.step();
  std::vector<double> g(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) g[i] = (pi - sigma.x(i)) * s[i];
  const EndpointDerivatives ds = endpoint_derivatives(s, h);
  const EndpointDerivatives dg = endpoint_derivatives(g, h);
  std::vector<double> out(2 * n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double w = 2.0 * static_cast<double>(k);
    out[2 * k - 2] = -detail::em_trig_integral(g, dg, h, w, false);
    out[2 * k - 1] = -detail::em_trig_integral(s, ds, h, w, true) / pi;
  }
  return out;
}

inline std::vector<double> t_forward(const Potential& sigma, Flavor flavor, std::size_t n) {
  return flavor == Flavor::borg ? t_borg(sigma, n) : t_dirichlet(sigma, n);
}

// ---------------------------------------------------------------------------
// Polynomial preimages of the special sequences.
//
// For a polynomial p the maps are finite sums over endpoint derivatives:
//   T_B p = sum_s -(1/pi)(-1)^{s-1} p^{(2s-2)}(0) e_{2s-1}
//                 +(1/pi)(-1)^{s-1} p^{(2s-2)}(pi) e_{2s},
//   T_D p = sum_j -(1/pi)(-1)^j d_j e^_{2j+1} - (-1)^j f_j e^_{2j+2},
// with d_j = p^{(2j)}(0) - p^{(2j)}(pi) and
// f_j = (2j+1) d_j - pi p^{(2j+1)}(0). Solving the square system for unit
// targets gives E_j with T E_j = e_j exactly.

struct Polynomial {
  std::vector<double> c;  // c[i] multiplies x^i

  double derivative(std::size_t order, double x) const {
    double acc = 0.0;
    for (std::size_t i = order; i < c.size(); ++i) {
      double f = 1.0;
      for (std::size_t r = 0; r < order; ++r) f *= static_cast<double>(i - r);
      acc += c[i] * f * std::pow(x, static_cast<double>(i - order));
    }
    return acc;
  }
  double operator()(double x) const { return derivative(0, x); }
};

namespace detail {

/// Coefficients of p in the special sequences e_1..e_count for monomial x^i.
inline std::vector<double> special_coordinates(const Polynomial& p, Flavor flavor, std::size_t count) {
  std::vector<double> out(count, 0.0);
  for (std::size_t j = 1; j <= count; ++j) {
    if (flavor == Flavor::borg) {
      const std::size_t s = (j + 1) / 2;
      const double sign = (s % 2 == 1) ? 1.0 : -1.0;  // (-1)^{s-1}
      if (j % 2 == 1) out[j - 1] = -sign / pi * p.derivative(2 * s - 2, 0.0);
      else out[j - 1] = sign / pi * p.derivative(2 * s - 2, pi);
    } else {
      const std::size_t jj = (j - 1) / 2;
      const double sign = (jj % 2 == 0) ? 1.0 : -1.0;  // (-1)^jj
      const double dj = p.derivative(2 * jj, 0.0) - p.derivative(2 * jj, pi);
      if (j % 2 == 1) {
        out[j - 1] = -sign / pi * dj;
      } else {
        const double fj = static_cast<double>(2 * jj + 1) * dj - pi * p.derivative(2 * jj + 1, 0.0);
        out[j - 1] = -sign * fj;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Polynomials E_1..E_count with T E_j = e_j exactly (Dirichlet: modulo
/// constants, E_j(0) = 0).
inline std::vector<Polynomial> special_preimages(Flavor flavor, std::size_t count) {
  if (count == 0) return {};
  // Borg: degree count-1 with unknowns x^0..x^{count-1}, count even.
  // Dirichlet: unknowns x^1..x^M, M = count rounded up to even.
  const std::size_t dim = flavor == Flavor::borg ? count + (count % 2) : count + (count % 2);
  const std::size_t offset = flavor == Flavor::borg ? 0 : 1;
  Eigen::MatrixXd a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Polynomial mono;
    mono.c.assign(i + offset + 1, 0.0);
    mono.c[i + offset] = 1.0;
    const auto coords = detail::special_coordinates(mono, flavor, dim);
    for (std::size_t j = 0; j < dim; ++j) a(j, i) = coords[j];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  std::vector<Polynomial> out;
  for (std::size_t j = 0; j < count; ++j) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    rhs(j) = 1.0;
    const Eigen::VectorXd sol = lu.solve(rhs);
    Polynomial p;
    p.c.assign(dim + offset, 0.0);
    for (std::size_t i = 0; i < dim; ++i) p.c[i + offset] = sol(i);
    out.push_back(p);
  }
  return out;
}

/// sigma from a truncated element of l^theta_B / l^theta_D:
/// Borg tail: -2 sum x_k sin(kx);
/// Dirichlet tail: -(4/pi^2) sum x_{2k-1} cos(2kx) - (4/pi) sum x_{2k} x sin(2kx),
/// plus sum c_j E_j. Dirichlet output has zero mean.
inline Potential t_inverse(const ExtSeq& coeffs, std::size_t n_grid = default_grid) {
  std::vector<double> s(n_grid + 1, 0.0);
  const double h = pi / static_cast<double>(n_grid);
  const auto& t = coeffs.tail;
  for (std::size_t i = 0; i <= n_grid; ++i) {
    const double x = static_cast<double>(i) * h;
    double v = 0.0;
    if (coeffs.flavor == Flavor::borg) {
      for (std::size_t k = 1; k <= t.size(); ++k) v -= 2.0 * t[k - 1] * std::sin(static_cast<double>(k) * x);
    } else {
      for (std::size_t p = 1; p <= t.size(); ++p) {
        const double w = 2.0 * static_cast<double>((p + 1) / 2);
        if (p % 2 == 1) v -= 4.0 / (pi * pi) * t[p - 1] * std::cos(w * x);
        else v -= 4.0 / pi * t[p - 1] * x * std::sin(w * x);
      }
    }
    s[i] = v;
  }
  const auto polys = special_preimages(coeffs.flavor, coeffs.special.size());
  for (std::size_t j = 0; j < polys.size(); ++j) {
    for (std::size_t i = 0; i <= n_grid; ++i) s[i] += coeffs.special[j] * polys[j](static_cast<double>(i) * h);
  }
  Potential out(std::move(s), coeffs.theta);
  return coeffs.flavor == Flavor::dirichlet ? remove_mean(out) : out;
}


/// Number of special sequences used by the square split: 2m (Borg) or m
/// rounded up to even (Dirichlet), so that both parities of positions carry
/// one special unknown each.
inline std::size_t square_special_count(double theta, Flavor flavor) {
  const std::size_t c = special_count(theta, flavor);
  return flavor == Flavor::borg ? c : c + (c % 2);
}

/// Square finite-section split: the last `count` positions of the raw
/// sequence fix the special coefficients and the remaining 2N - count
/// positions form the tail. T of t_inverse of the result reproduces raw on
/// all 2N positions, and the map from 2N numbers to potentials is injective.
inline ExtSeq split_square(const std::vector<double>& raw, double theta, Flavor flavor, std::size_t count) {
  ExtSeq out;
  out.theta = theta;
  out.flavor = flavor;
  out.n = raw.size() / 2;
  out.tail = raw;
  if (count == 0) return out;
  if (raw.size() < 2 * count) throw error(errc::ill_conditioned_fit, "sequence too short for the special split");
  const std::size_t len = raw.size();
  Eigen::MatrixXd a(count, count);
  Eigen::VectorXd b(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t p = len - count + 1 + i;
    for (std::size_t j = 0; j < count; ++j) a(i, j) = special_value(flavor, j + 1, p);
    b(i) = raw[p - 1];
  }
  const Eigen::VectorXd c = a.fullPivLu().solve(b);
  out.special.assign(c.data(), c.data() + count);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t p = 1; p <= len; ++p) out.tail[p - 1] -= c(j) * special_value(flavor, j + 1, p);
  }
  for (std::size_t p = len - count + 1; p <= len; ++p) out.tail[p - 1] = 0.0;
  return out;
}

/// Finite-section inverse of T on a raw truncated sequence.
inline Potential t_inverse_raw(const std::vector<double>& raw, double theta, Flavor flavor,
                               std::size_t n_grid = default_grid) {
  return t_inverse(split_square(raw, theta, flavor, square_special_count(theta, flavor)), n_grid);
}

// ---------------------------------------------------------------------------
// Biorthogonal systems.

/// phi_k, psi_k with (phi_k, psi_m) = delta_km and F'(sigma) f = {scale_k (phi_k, f)},
/// so (F'(sigma))^{-1} s = sum s_k psi_k / scale_k.
struct BasisFunctions {
  Flavor flavor = Flavor::borg;
  std::size_t n = 0;
  Eigen::MatrixXd phi;  // 2N x (n_grid + 1)
  Eigen::MatrixXd psi;
  std::vector<double> gamma;  // rho_k int y_k^2 (Borg), 1 (Dirichlet)
  std::vector<double> scale;  // -pi / (2 gamma_k) (Borg), 1 (Dirichlet)
  std::string normalization;  // eigenfunction normalization used
  double step = 0.0;
};

inline constexpr double degenerate_threshold = 1e-12;

namespace detail {

struct Sampled {
  std::vector<double> y, u, dy;  // solution, quasi-derivative, derivative
};

inline Sampled sample(const Propagator& prop, const std::vector<double>& y, const std::vector<double>& u) {
  Sampled s{y, u, std::vector<double>(y.size())};
  for (std::size_t i = 0; i < y.size(); ++i) s.dy[i] = prop.derivative(y[i], u[i], i);
  return s;
}

/// int y^2 with the exact-derivative endpoint correction.
inline double square_integral(const Sampled& s, double h) {
  std::vector<double> f(s.y.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = s.y[i] * s.y[i];
  const std::size_t n = f.size() - 1;
  return trapezoid_corrected(f, h, 2.0 * s.y[0] * s.dy[0], 2.0 * s.y[n] * s.dy[n]);
}

inline Sampled forward_solution(const Propagator& prop, double lambda, double u0) {
  std::vector<double> y, u;
  prop.trajectory(lambda, 0.0, u0, y, u);
  return sample(prop, y, u);
}

inline Sampled terminal_solution(const Propagator& prop, double lambda, double y_pi, double u_pi) {
  std::vector<double> y, u;
  prop.terminal_trajectory(lambda, y_pi, u_pi, y, u);
  return sample(prop, y, u);
}

inline double lambda_step(double lambda) { return 1e-4 * (1.0 + std::abs(lambda)); }

}  // namespace detail

/// Borg: y_k with y_k^[1](0) = sqrt(rho_k); phi_k = (2/pi) y_k' y_k;
/// psi_k = 2 pi y_k w_k with w_k the terminal solution
///   w(pi) = (int y^2 * y^[1](pi))^{-1}, w^[1](pi) = 0        (k = 2n),
///   w(pi) = 0, w^[1](pi) = -(int y^2 * y(pi))^{-1}           (k = 2n - 1).
/// Dirichlet: y_k with y_k^[1](0) = sqrt(lambda_k), z normalized by int z^2 = 1/lambda
/// with z(pi) = 0;
///   phi_{2k-1} = 2 alpha lambda d/dlambda (z z'),  phi_{2k} = -y' y / (alpha sqrt(lambda)),
///   psi_{2k-1} = (2/alpha^2) y^2,                  psi_{2k} = -(4 sqrt(lambda)/alpha) d/dlambda y^2.
inline BasisFunctions build_basis(const Potential& sigma, const EigenData& eigen, Flavor flavor) {
  const Propagator prop(sigma);
  const std::size_t n_grid = sigma.n_grid();
  const double h = sigma.step();
  BasisFunctions b;
  b.flavor = flavor;
  b.n = eigen.n;
  b.step = h;
  b.phi.resize(static_cast<Eigen::Index>(2 * eigen.n), static_cast<Eigen::Index>(n_grid + 1));
  b.psi.resizeLike(b.phi);
  b.gamma.assign(2 * eigen.n, 1.0);
  b.scale.assign(2 * eigen.n, 1.0);

  if (flavor == Flavor::borg) {
    if (eigen.mu.size() < eigen.n) throw error(errc::invalid_argument, "Borg basis needs both spectra");
    b.normalization = "y^[1](0) = sqrt(rho_k)";
    for (std::size_t p = 1; p <= 2 * eigen.n; ++p) {
      const bool dirichlet_slot = (p % 2 == 0);
      const double lam = dirichlet_slot ? eigen.lambda[p / 2 - 1] : eigen.mu[(p + 1) / 2 - 1];
      require_positive(lam);
      const double rho = std::sqrt(lam);
      const auto y = detail::forward_solution(prop, lam, std::sqrt(rho));
      const double iy = detail::square_integral(y, h);
      if (std::abs(iy) < degenerate_threshold) {
        throw error(errc::degenerate_denominator, "(y_k^2, 1) vanishes at k = " + std::to_string(p));
      }
      double w_pi, wu_pi;
      if (dirichlet_slot) {
        w_pi = 1.0 / (iy * y.u[n_grid]);
        wu_pi = 0.0;
      } else {
        w_pi = 0.0;
        wu_pi = -1.0 / (iy * y.y[n_grid]);
      }
      const auto w = detail::terminal_solution(prop, lam, w_pi, wu_pi);
      const auto row = static_cast<Eigen::Index>(p - 1);
      for (std::size_t i = 0; i <= n_grid; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        b.phi(row, col) = 2.0 / pi * y.dy[i] * y.y[i];
        b.psi(row, col) = 2.0 * pi * y.y[i] * w.y[i];
      }
      b.gamma[p - 1] = rho * iy;
      b.scale[p - 1] = -pi / (2.0 * b.gamma[p - 1]);
    }
    return b;
  }

  if (eigen.alpha.size() < eigen.n) throw error(errc::invalid_argument, "Dirichlet basis needs norming constants");
  b.normalization = "y^[1](0) = sqrt(lambda_k)";
  for (std::size_t k = 1; k <= eigen.n; ++k) {
    const double lam = eigen.lambda[k - 1];
    require_positive(lam);
    const double dl = detail::lambda_step(lam);
    const auto y = detail::forward_solution(prop, lam, std::sqrt(lam));
    const double alpha = detail::square_integral(y, h);
    const auto yp = detail::forward_solution(prop, lam + dl, std::sqrt(lam + dl));
    const auto ym = detail::forward_solution(prop, lam - dl, std::sqrt(lam - dl));

    // z z' at lambda +- dl, z(pi) = 0 and int z^2 = 1/lambda.
    auto zz = [&](double l) {
      const auto v = detail::terminal_solution(prop, l, 0.0, 1.0);
      const double norm2 = l * detail::square_integral(v, h);
      std::vector<double> out(n_grid + 1);
      for (std::size_t i = 0; i <= n_grid; ++i) out[i] = v.y[i] * v.dy[i] / norm2;
      return out;
    };
    const auto zp = zz(lam + dl);
    const auto zm = zz(lam - dl);

    const auto r_odd = static_cast<Eigen::Index>(2 * k - 2);
    const auto r_even = static_cast<Eigen::Index>(2 * k - 1);
    const double sq = std::sqrt(lam);
    for (std::size_t i = 0; i <= n_grid; ++i) {
      const auto col = static_cast<Eigen::Index>(i);
      const double dy2 = (yp.y[i] * yp.y[i] - ym.y[i] * ym.y[i]) / (2.0 * dl);
      b.phi(r_odd, col) = 2.0 * alpha * lam * (zp[i] - zm[i]) / (2.0 * dl);
      b.phi(r_even, col) = -y.dy[i] * y.y[i] / (alpha * sq);
      b.psi(r_odd, col) = 2.0 / (alpha * alpha) * y.y[i] * y.y[i];
      b.psi(r_even, col) = -4.0 * sq / alpha * dy2;
    }
  }
  return b;
}

inline std::vector<double> basis_row(const Eigen::MatrixXd& m, std::size_t row) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(static_cast<Eigen::Index>(row), j);
  return out;
}

/// Gram matrix (phi_k, psi_m), k, m < size.
inline Eigen::MatrixXd biorthogonality_gram(const BasisFunctions& b, std::size_t size) {
  const std::size_t m = std::min<std::size_t>(size, static_cast<std::size_t>(b.phi.rows()));
  Eigen::MatrixXd g(m, m);
  std::vector<std::vector<double>> phi(m), psi(m);
  for (std::size_t k = 0; k < m; ++k) {
    phi[k] = basis_row(b.phi, k);
    psi[k] = basis_row(b.psi, k);
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = inner_product(phi[k], psi[j], b.step);
    }
  }
  return g;
}

/// [F'(sigma) f]_k = scale_k (phi_k, f).
inline std::vector<double> frechet_derivative(const Potential& sigma, const EigenData& eigen,
                                              const BasisFunctions& basis, const Potential& f) {
  if (f.n_grid() != sigma.n_grid() || static_cast<std::size_t>(basis.phi.cols()) != f.n_grid() + 1) {
    throw error(errc::invalid_argument, "grid mismatch");
  }
  (void)eigen;
  std::vector<double> out(2 * basis.n);
  const std::vector<double> fv(f.samples().begin(), f.samples().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (basis.flavor == Flavor::borg && std::abs(basis.gamma[k]) < degenerate_threshold) {
      throw error(errc::degenerate_denominator, "gamma_k vanishes at k = " + std::to_string(k + 1));
    }
    out[k] = basis.scale[k] * inner_product(basis_row(basis.phi, k), fv, basis.step);
  }
  return out;
}

/// sum_k coeffs_k psi_k / scale_k: the inverse derivative applied to coeffs.
inline Potential inverse_derivative_apply(const BasisFunctions& basis, const std::vector<double>& coeffs,
                                          double theta) {
  std::vector<double> s(static_cast<std::size_t>(basis.psi.cols()), 0.0);
  for (std::size_t k = 0; k < coeffs.size() && k < static_cast<std::size_t>(basis.psi.rows()); ++k) {
    const double c = coeffs[k] / basis.scale[k];
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += c * basis.psi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
  }
  Potential out(std::move(s), theta);
  return basis.flavor == Flavor::dirichlet ? remove_mean(out) : out;
}

}  // namespace slinv
