#pragma once

// Cauchy problem for the quasi-derivative form of -y'' + q y = lambda y with
// sigma = integral of q:
//
//   y' = sigma y + u,   u' = -(sigma^2 + lambda) y - sigma u,   u = y^[1].
//
// The coefficient matrix A(x) = B(x) - lambda E is traceless, so each step is
// the exponential of a traceless 2x2 Magnus generator and is unimodular.
// Steps span two grid intervals (nodes x_{2j}, x_{2j+1}, x_{2j+2}): Simpson
// for the first Magnus term plus the endpoint commutator, fourth order on
// smooth sigma and exact for constant sigma. sigma is only read at grid nodes.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/potential.hpp"

namespace slinv {

struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;  // [[a, b], [c, d]]

  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  friend Mat2 operator*(double s, const Mat2& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  double det() const { return a * d - b * c; }
};

inline Mat2 commutator(const Mat2& x, const Mat2& y) { return x * y - y * x; }

/// exp(M) for traceless M, using M^2 = -det(M) I.
inline Mat2 expm_traceless(const Mat2& m) {
  const double q = -m.det();  // M^2 = q I
  double c, s;
  if (std::abs(q) < 1e-8) {
    c = 1.0 + q / 2.0 + q * q / 24.0;
    s = 1.0 + q / 6.0 + q * q / 120.0;
  } else if (q < 0.0) {
    const double w = std::sqrt(-q);
    c = std::cos(w);
    s = std::sin(w) / w;
  } else {
    const double w = std::sqrt(q);
    c = std::cosh(w);
    s = std::sinh(w) / w;
  }
  return {c + s * m.a, s * m.b, s * m.c, c + s * m.d};
}

/// Solution (y, y^[1]) of the quasi-derivative system for one lambda.
struct CauchySolution {
  double lambda = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> u;
};

/// State at x = pi plus the number of sign changes of y on (0, pi].
struct Shot {
  double y = 0.0;
  double u = 0.0;
  std::size_t zeros = 0;
};

inline constexpr double overflow_limit = 1e150;

/// Step generators for one potential. The generator of every step is affine in
/// lambda, Omega = P + lambda Q, so the per-lambda cost is one traceless
/// exponential per step.
class Propagator {
 public:
  explicit Propagator(const Potential& sigma) : sigma_(sigma.samples().begin(), sigma.samples().end()) {
    const std::size_t n = sigma.n_grid();
    h_ = sigma.step();
    pairs_ = n / 2;
    odd_tail_ = (n % 2) != 0;
    const Mat2 e{0, 0, 1, 0};
    auto b_of = [](double s) { return Mat2{s, 1.0, -s * s, -s}; };

    const double big = 2.0 * h_;
    pair_.reserve(pairs_);
    half_.reserve(pairs_);
    const double g = std::sqrt(3.0) / 6.0;
    for (std::size_t j = 0; j < pairs_; ++j) {
      const double s0 = sigma_[2 * j], s1 = sigma_[2 * j + 1], s2 = sigma_[2 * j + 2];
      const Mat2 b0 = b_of(s0), b1 = b_of(s1), b2 = b_of(s2);
      Step st;
      st.p = (big / 6.0) * (b0 + 4.0 * b1 + b2) - (big * big / 12.0) * commutator(b0, b2);
      st.q = (-big) * e + (big * big / 12.0) * commutator(b0 - b2, e);
      pair_.push_back(st);

      // Output-only half step over [x_{2j}, x_{2j+1}]: two-point Gauss Magnus
      // with sigma at the Gauss points from the quadratic through the pair.
      auto interp = [&](double xi) {
        return s0 * (xi - 1.0) * (xi - 2.0) / 2.0 - s1 * xi * (xi - 2.0) + s2 * xi * (xi - 1.0) / 2.0;
      };
      const Mat2 ga = b_of(interp(0.5 - g)), gb = b_of(interp(0.5 + g));
      const double k = std::sqrt(3.0) / 12.0 * h_ * h_;
      Step hs;
      hs.p = (h_ / 2.0) * (ga + gb) - k * commutator(ga, gb);
      hs.q = (-h_) * e + k * commutator(ga - gb, e);
      half_.push_back(hs);
    }
    if (odd_tail_) {
      const Mat2 b0 = b_of(sigma_[n - 1]), b1 = b_of(sigma_[n]);
      tail_.p = (h_ / 2.0) * (b0 + b1) - (h_ * h_ / 12.0) * commutator(b0, b1);
      tail_.q = (-h_) * e + (h_ * h_ / 12.0) * commutator(b0 - b1, e);
    }
  }

  std::size_t n_grid() const noexcept { return sigma_.size() - 1; }
  double step() const noexcept { return h_; }
  double sigma_at(std::size_t i) const noexcept { return sigma_[i]; }

  /// Integrates from x = 0 to x = pi, counting sign changes of y.
  Shot shoot(double lambda, double y0, double u0) const {
    double y = y0, u = u0;
    int last_sign = (y0 != 0.0) ? (y0 > 0 ? 1 : -1) : (u0 >= 0 ? 1 : -1);
    std::size_t zeros = 0;
    auto track = [&](double v) {
      if (v == 0.0) return;
      const int sg = v > 0 ? 1 : -1;
      if (sg != last_sign) {
        ++zeros;
        last_sign = sg;
      }
    };
    for (const Step& st : pair_) {
      const Mat2 m = expm_traceless(st.p + lambda * st.q);
      const double ny = m.a * y + m.b * u;
      const double nu = m.c * y + m.d * u;
      y = ny;
      u = nu;
      track(y);
    }
    if (odd_tail_) {
      const Mat2 m = expm_traceless(tail_.p + lambda * tail_.q);
      const double ny = m.a * y + m.b * u;
      u = m.c * y + m.d * u;
      y = ny;
      track(y);
    }
    if (!(std::abs(y) < overflow_limit) || !(std::abs(u) < overflow_limit)) {
      throw error(errc::integration_overflow, "|y| exceeded 1e150 at lambda = " + std::to_string(lambda));
    }
    return {y, u, zeros};
  }

  /// Continuous Pruefer angle atan2(y, y^[1]) at x = pi for y(0) = 0,
  /// y^[1](0) = 1. Strictly increasing in lambda; Dirichlet eigenvalues sit
  /// at k*pi and Dirichlet-Neumann eigenvalues at (k - 1/2)*pi.
  double prufer_angle(double lambda) const {
    const Shot s = shoot(lambda, 0.0, 1.0);
    const double sg = (s.zeros % 2 == 0) ? 1.0 : -1.0;
    return static_cast<double>(s.zeros) * pi + std::atan2(sg * s.y, sg * s.u);
  }

  /// Full trajectory on every grid node.
  void trajectory(double lambda, double y0, double u0, std::vector<double>& ys,
                  std::vector<double>& us) const {
    const std::size_t n = n_grid();
    ys.assign(n + 1, 0.0);
    us.assign(n + 1, 0.0);
    double y = y0, u = u0;
    ys[0] = y;
    us[0] = u;
    for (std::size_t j = 0; j < pairs_; ++j) {
      const Mat2 mh = expm_traceless(half_[j].p + lambda * half_[j].q);
      ys[2 * j + 1] = mh.a * y + mh.b * u;
      us[2 * j + 1] = mh.c * y + mh.d * u;
      const Mat2 m = expm_traceless(pair_[j].p + lambda * pair_[j].q);
      const double ny = m.a * y + m.b * u;
      u = m.c * y + m.d * u;
      y = ny;
      ys[2 * j + 2] = y;
      us[2 * j + 2] = u;
    }
    if (odd_tail_) {
      const Mat2 m = expm_traceless(tail_.p + lambda * tail_.q);
      ys[n] = m.a * y + m.b * u;
      us[n] = m.c * y + m.d * u;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (!(std::abs(ys[i]) < overflow_limit) || !(std::abs(us[i]) < overflow_limit)) {
        throw error(errc::integration_overflow, "|y| exceeded 1e150 at lambda = " + std::to_string(lambda));
      }
    }
  }

  /// Solution with prescribed values (y, y^[1]) at x = pi, obtained from the
  /// two forward fundamental solutions and the unimodular transfer matrix.
  void terminal_trajectory(double lambda, double y_pi, double u_pi, std::vector<double>& ys,
                           std::vector<double>& us) const {
    std::vector<double> y1, u1, y2, u2;
    trajectory(lambda, 1.0, 0.0, y1, u1);
    trajectory(lambda, 0.0, 1.0, y2, u2);
    const std::size_t n = n_grid();
    // Phi(pi) = [[y1, y2], [u1, u2]]; coefficients = Phi(pi)^{-1} (y_pi, u_pi).
    const double det = y1[n] * u2[n] - y2[n] * u1[n];
    const double c1 = (u2[n] * y_pi - y2[n] * u_pi) / det;
    const double c2 = (-u1[n] * y_pi + y1[n] * u_pi) / det;
    ys.resize(n + 1);
    us.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      ys[i] = c1 * y1[i] + c2 * y2[i];
      us[i] = c1 * u1[i] + c2 * u2[i];
    }
  }

  /// Classical derivative y' = y^[1] + sigma y at node i.
  double derivative(double y, double u, std::size_t i) const noexcept { return u + sigma_[i] * y; }

 private:
  struct Step {
    Mat2 p, q;
  };
  std::vector<double> sigma_;
  double h_ = 0.0;
  std::size_t pairs_ = 0;
  bool odd_tail_ = false;
  std::vector<Step> pair_;
  std::vector<Step> half_;
  Step tail_;
};

inline void require_positive(double lambda) {
  if (!(lambda > 0.0)) {
    throw error(errc::non_positive_lambda,
                "lambda = " + std::to_string(lambda) + " <= 0; shift the potential first");
  }
}

/// s(x, lambda) with s(0) = 0 and s^[1](0) = sqrt(lambda), on the potential's grid.
inline CauchySolution integrate(const Propagator& prop, double lambda) {
  require_positive(lambda);
  CauchySolution sol;
  sol.lambda = lambda;
  prop.trajectory(lambda, 0.0, std::sqrt(lambda), sol.y, sol.u);
  sol.x.resize(sol.y.size());
  for (std::size_t i = 0; i < sol.x.size(); ++i) sol.x[i] = static_cast<double>(i) * prop.step();
  return sol;
}

inline CauchySolution integrate(const Potential& sigma, double lambda) {
  require_positive(lambda);
  return integrate(Propagator(sigma), lambda);
}

/// (s(pi, lambda), s^[1](pi, lambda)); the zeros in lambda of the first are
/// the Dirichlet eigenvalues, of the second the Dirichlet-Neumann ones.
inline std::pair<double, double> boundary_functionals(const Propagator& prop, double lambda) {
  require_positive(lambda);
  const Shot s = prop.shoot(lambda, 0.0, std::sqrt(lambda));
  return {s.y, s.u};
}

inline std::pair<double, double> boundary_functionals(const Potential& sigma, double lambda) {
  require_positive(lambda);
  return boundary_functionals(Propagator(sigma), lambda);
}

}  // namespace slinv
