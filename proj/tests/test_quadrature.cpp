#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "slinv/potential.hpp"
#include "slinv/quadrature.hpp"

using namespace slinv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> sampled(double (*f)(double), std::size_t n) {
  std::vector<double> v(n + 1);
  const double h = pi / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) v[i] = f(static_cast<double>(i) * h);
  return v;
}

double smooth(double x) { return std::exp(0.3 * x) * std::cos(2.0 * x) + x * x; }
double smooth_d(double x) {
  return 0.3 * std::exp(0.3 * x) * std::cos(2.0 * x) - 2.0 * std::exp(0.3 * x) * std::sin(2.0 * x) + 2.0 * x;
}

}  // namespace

TEST_CASE("trapezoid rules against Gauss-Kronrod", "[quadrature]") {
  const double exact = oracle::integral(smooth);
  const std::size_t n = 256;
  const double h = pi / n;
  const auto f = sampled(smooth, n);
  const double plain = trapezoid(f, h);
  const double corrected = trapezoid_corrected(f, h, smooth_d(0.0), smooth_d(pi));
  const double fd = trapezoid_fd(f, h);
  CHECK(std::abs(plain - exact) > 1e-6);
  CHECK(std::abs(corrected - exact) < 1e-8);
  CHECK(std::abs(fd - exact) < 1e-10);
}

TEST_CASE("trapezoid_fd converges at fourth order or better", "[quadrature][property]") {
  const double exact = oracle::integral(smooth);
  const double e1 = std::abs(trapezoid_fd(sampled(smooth, 64), pi / 64) - exact);
  const double e2 = std::abs(trapezoid_fd(sampled(smooth, 128), pi / 128) - exact);
  CHECK(e1 / e2 >= 16.0);
}

TEST_CASE("cumulative_hermite is exact for cubics", "[quadrature]") {
  const std::size_t n = 64;
  const double h = pi / n;
  std::vector<double> f(n + 1), df(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = i * h;
    f[i] = 1.0 - 2.0 * x + 0.5 * x * x * x;
    df[i] = -2.0 + 1.5 * x * x;
  }
  const auto c = cumulative_hermite(f, df, h);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = i * h;
    CHECK_THAT(c[i], WithinAbs(x - x * x + 0.125 * x * x * x * x, 1e-12));
  }
}

TEST_CASE("endpoint derivatives from one-sided stencils", "[quadrature]") {
  const std::size_t n = 512;
  const auto f = sampled([](double x) { return std::sin(1.5 * x); }, n);
  const auto d = endpoint_derivatives(f, pi / n);
  CHECK_THAT(d.left[1], WithinAbs(1.5, 1e-9));
  CHECK_THAT(d.left[2], WithinAbs(0.0, 1e-6));
  CHECK_THAT(d.left[3], WithinAbs(-3.375, 1e-3));
  CHECK_THAT(d.right[1], WithinAbs(1.5 * std::cos(1.5 * pi), 1e-9));
  CHECK_THAT(d.right[2], WithinAbs(-2.25 * std::sin(1.5 * pi), 1e-6));
}

TEST_CASE("inner_product of orthogonal sines", "[quadrature]") {
  const std::size_t n = 1024;
  const double h = pi / n;
  for (int k = 1; k <= 6; ++k) {
    for (int m = 1; m <= 6; ++m) {
      std::vector<double> a(n + 1), b(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        a[i] = std::sin(k * i * h);
        b[i] = std::sin(m * i * h);
      }
      CHECK_THAT(inner_product(a, b, h), WithinAbs(k == m ? pi / 2 : 0.0, 1e-12));
    }
  }
}
