#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slinv/error.hpp"

namespace slinv {

inline constexpr double pi = std::numbers::pi;

/// Default uniform grid size over [0, pi].
inline constexpr std::size_t default_grid = 2048;
inline constexpr std::size_t min_grid = 64;

/// Antiderivative sigma of a real potential q, sampled at x_i = i*pi/n.
/// q itself is never formed; the quasi-derivative system only needs sigma.
/// `theta` is the caller's declared smoothness index and is advisory.
class Potential {
 public:
  explicit Potential(std::vector<double> samples, double theta = 1.0)
      : samples_(std::move(samples)), theta_(theta) {
    if (samples_.size() < min_grid + 1) {
      throw error(errc::invalid_potential,
                  "grid must have at least " + std::to_string(min_grid) + " intervals");
    }
    if (!(theta_ >= 0.0) || !std::isfinite(theta_)) {
      throw error(errc::invalid_potential, "theta must be finite and >= 0");
    }
    for (double v : samples_) {
      if (!std::isfinite(v)) throw error(errc::invalid_potential, "non-finite sample");
    }
  }

  template <class F>
  static Potential from_function(F&& f, std::size_t n_grid = default_grid, double theta = 1.0) {
    std::vector<double> s(n_grid + 1);
    const double h = pi / static_cast<double>(n_grid);
    for (std::size_t i = 0; i <= n_grid; ++i) s[i] = f(static_cast<double>(i) * h);
    return Potential(std::move(s), theta);
  }

  static Potential zero(std::size_t n_grid = default_grid, double theta = 1.0) {
    return Potential(std::vector<double>(n_grid + 1, 0.0), theta);
  }

  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t n_grid() const noexcept { return samples_.size() - 1; }
  double theta() const noexcept { return theta_; }
  double step() const noexcept { return pi / static_cast<double>(n_grid()); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * step(); }
  double operator[](std::size_t i) const noexcept { return samples_[i]; }

  Potential with_theta(double theta) const { return Potential(samples_, theta); }

 private:
  std::vector<double> samples_;
  double theta_;
};

/// sigma + c (x - pi). Both Dirichlet and Dirichlet-Neumann spectra move by c.
inline Potential shift_potential(const Potential& sigma, double c) {
  std::vector<double> s(sigma.samples().begin(), sigma.samples().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += c * (sigma.x(i) - pi);
  return Potential(std::move(s), sigma.theta());
}

inline Potential operator+(const Potential& a, const Potential& b) {
  if (a.n_grid() != b.n_grid()) throw error(errc::invalid_argument, "grid mismatch");
  std::vector<double> s(a.samples().begin(), a.samples().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += b[i];
  return Potential(std::move(s), a.theta());
}

inline Potential operator-(const Potential& a, const Potential& b) {
  if (a.n_grid() != b.n_grid()) throw error(errc::invalid_argument, "grid mismatch");
  std::vector<double> s(a.samples().begin(), a.samples().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] -= b[i];
  return Potential(std::move(s), a.theta());
}

inline Potential operator*(double a, const Potential& p) {
  std::vector<double> s(p.samples().begin(), p.samples().end());
  for (double& v : s) v *= a;
  return Potential(std::move(s), p.theta());
}

/// Trapezoid mean of sigma over [0, pi].
inline double mean_value(const Potential& sigma) {
  const auto s = sigma.samples();
  double acc = 0.5 * (s.front() + s.back());
  for (std::size_t i = 1; i + 1 < s.size(); ++i) acc += s[i];
  return acc / static_cast<double>(sigma.n_grid());
}

/// Representative of sigma modulo constants with zero mean.
inline Potential remove_mean(const Potential& sigma) {
  const double m = mean_value(sigma);
  std::vector<double> s(sigma.samples().begin(), sigma.samples().end());
  for (double& v : s) v -= m;
  return Potential(std::move(s), sigma.theta());
}

}  // namespace slinv
