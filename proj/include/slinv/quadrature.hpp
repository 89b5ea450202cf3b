#pragma once

// Trapezoid-class quadrature on the uniform grid x_i = i h.
// Corrections follow the Euler-Maclaurin expansion
//   T - I = h^2/12 (f'(b) - f'(a)) - h^4/720 (f'''(b) - f'''(a)) + ...
// with endpoint derivatives either supplied exactly (ODE states) or
// estimated by one-sided finite differences.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace slinv {

inline double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) return 0.0;
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
  return acc * h;
}

/// Trapezoid with the h^2 endpoint correction from exact derivatives.
inline double trapezoid_corrected(std::span<const double> f, double h, double df_a, double df_b) {
  return trapezoid(f, h) - h * h / 12.0 * (df_b - df_a);
}

/// Cumulative integral F_i = int_0^{x_i} f using the two-point Hermite rule
/// per interval (exact for cubics); needs exact derivative samples.
inline std::vector<double> cumulative_hermite(std::span<const double> f, std::span<const double> df,
                                              double h) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    out[i + 1] = out[i] + 0.5 * h * (f[i] + f[i + 1]) + h * h / 12.0 * (df[i] - df[i + 1]);
  }
  return out;
}

/// Finite-difference weights for derivatives 0..max_order at z from nodes
/// (Fornberg's recursion). Result[m][j] multiplies f(nodes[j]) for order m.
inline std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes, int max_order) {
  const std::size_t n = nodes.size();
  const std::size_t mo = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(mo + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mo);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Derivatives of order 1..3 at both ends of the sampled interval, from
/// 8-point one-sided stencils.
struct EndpointDerivatives {
  std::array<double, 4> left{};   // [0] unused, [k] = f^(k)(a)
  std::array<double, 4> right{};  // [k] = f^(k)(b)
};

inline EndpointDerivatives endpoint_derivatives(std::span<const double> f, double h) {
  constexpr std::size_t points = 8;
  EndpointDerivatives d;
  const std::size_t n = f.size();
  if (n < points) return d;
  std::array<double, points> nodes{};
  for (std::size_t j = 0; j < points; ++j) nodes[j] = static_cast<double>(j) * h;
  const auto w = fd_weights(0.0, nodes, 3);
  for (int k = 1; k <= 3; ++k) {
    double l = 0.0, r = 0.0;
    for (std::size_t j = 0; j < points; ++j) {
      l += w[k][j] * f[j];
      r += w[k][j] * f[n - 1 - j];
    }
    d.left[k] = l;
    // Mirrored stencil: odd derivatives change sign.
    d.right[k] = (k % 2 == 1) ? -r : r;
  }
  return d;
}

/// Trapezoid with h^2 and h^4 Euler-Maclaurin corrections from estimated
/// endpoint derivatives; for generic smooth sampled integrands.
inline double trapezoid_fd(std::span<const double> f, double h) {
  const EndpointDerivatives d = endpoint_derivatives(f, h);
  const double h2 = h * h;
  return trapezoid(f, h) - h2 / 12.0 * (d.right[1] - d.left[1]) +
         h2 * h2 / 720.0 * (d.right[3] - d.left[3]);
}

inline double inner_product(std::span<const double> a, std::span<const double> b, double h) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return trapezoid_fd(p, h);
}

}  // namespace slinv
