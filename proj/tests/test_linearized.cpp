#include "catch_amalgamated.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "slinv/linearized.hpp"
#include "slinv/potential.hpp"
#include "slinv/spectra.hpp"

using namespace slinv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Potential sin_mode(double a, double k, std::size_t n_grid = default_grid) {
  return Potential::from_function([=](double x) { return a * std::sin(k * x); }, n_grid);
}

double max_gram_deviation(const Eigen::MatrixXd& g) {
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("t_borg examples", "[linearized]") {
  for (double v : t_borg(Potential::zero(), 8)) CHECK(v == 0.0);

  const auto s2 = t_borg(sin_mode(1.0, 2.0), 8);
  for (std::size_t k = 1; k <= 16; ++k) CHECK_THAT(s2[k - 1], WithinAbs(k == 2 ? -0.5 : 0.0, 1e-10));

  const auto one = t_borg(Potential::from_function([](double) { return 1.0; }), 8);
  for (std::size_t k = 1; k <= 16; ++k) {
    CHECK_THAT(one[k - 1], WithinAbs(k % 2 == 1 ? -2.0 / (pi * double(k)) : 0.0, 1e-10));
  }
}

TEST_CASE("t_dirichlet examples", "[linearized]") {
  for (double v : t_dirichlet(Potential::zero(), 8)) CHECK(v == 0.0);

  const auto s2 = t_dirichlet(sin_mode(1.0, 2.0), 4);
  CHECK_THAT(s2[0], WithinAbs(-pi / 8, 1e-10));
  CHECK_THAT(s2[1], WithinAbs(-0.5, 1e-10));
  for (std::size_t k = 2; k <= 4; ++k) {
    const double kd = static_cast<double>(k);
    CHECK_THAT(s2[2 * k - 2], WithinAbs(-0.5 * (pi / (2.0 * kd + 2.0) + pi / (2.0 - 2.0 * kd)), 1e-10));
    CHECK(std::abs(s2[2 * k - 1]) <= 1e-10);
  }

  const auto c2 = t_dirichlet(Potential::from_function([](double x) { return std::cos(2.0 * x); }), 4);
  const double slot1 = oracle::t_dirichlet_entry([](double t) { return std::cos(2.0 * t); }, 1);
  CHECK_THAT(c2[0], WithinAbs(slot1, 1e-10));
  CHECK_THAT(c2[0], WithinAbs(-pi * pi / 4, 1e-10));
  for (std::size_t p = 2; p <= 8; p += 2) CHECK(std::abs(c2[p - 1]) <= 1e-10);
}

TEST_CASE("T maps match Gauss-Kronrod quadrature on smooth potentials", "[linearized][property]") {
  for (unsigned seed = 1; seed <= 3; ++seed) {
    const auto f = oracle::smooth_member(seed, 1.0, 8);
    const auto sigma = Potential::from_function(f);
    const auto tb = t_borg(sigma, 8);
    const auto td = t_dirichlet(sigma, 8);
    for (std::size_t p = 1; p <= 16; ++p) {
      CHECK_THAT(tb[p - 1], WithinAbs(oracle::t_borg_entry(f, p), 1e-10));
      CHECK_THAT(td[p - 1], WithinAbs(oracle::t_dirichlet_entry(f, p), 1e-10));
    }
  }
}

TEST_CASE("t_inverse examples", "[linearized]") {
  ExtSeq x;
  x.flavor = Flavor::borg;
  x.theta = 1.0;
  x.n = 8;
  x.tail.assign(16, 0.0);
  x.special = {0.0, 0.0};
  CHECK(oracle::sup_diff(t_inverse(x), Potential::zero()) == 0.0);

  x.tail[1] = -0.5;
  CHECK(oracle::sup_diff(t_inverse(x), sin_mode(1.0, 2.0)) <= 1e-8);
}

TEST_CASE("special preimages map onto the special sequences", "[linearized]") {
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    const std::size_t count = f == Flavor::borg ? 4 : 2;
    const auto polys = special_preimages(f, count);
    REQUIRE(polys.size() == count);
    for (std::size_t j = 1; j <= count; ++j) {
      for (std::size_t n : {16u, 32u, 64u}) {
        const auto p = Potential::from_function(polys[j - 1]);
        const auto got = t_forward(p, f, n);
        const auto want = special_sequence(f, j, 2 * n);
        CHECK(oracle::max_abs_diff(got, want) <= 1e-8);
      }
    }
  }
}

TEST_CASE("T of t_inverse recombines the sequence", "[linearized][property]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    for (int trial = 0; trial < 4; ++trial) {
      ExtSeq x;
      x.flavor = f;
      x.theta = 1.0;
      x.n = 32;
      x.tail.resize(64);
      for (std::size_t p = 1; p <= 64; ++p) x.tail[p - 1] = u(rng) / (double(p) * double(p));
      x.special.resize(special_count(1.0, f));
      for (double& c : x.special) c = u(rng);
      const auto sigma = t_inverse(x);
      CHECK(oracle::max_abs_diff(t_forward(sigma, f, 32), recombine(x)) <= 1e-8);
    }
  }
}

TEST_CASE("split_square reproduces the raw sequence", "[linearized][property]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    std::vector<double> raw(64);
    for (std::size_t p = 1; p <= 64; ++p) raw[p - 1] = u(rng) / double(p);
    const auto x = split_square(raw, 1.0, f, square_special_count(1.0, f));
    CHECK(oracle::max_abs_diff(recombine(x), raw) <= 1e-12);
    const auto back = t_forward(t_inverse_raw(raw, 1.0, f), f, 32);
    CHECK(oracle::max_abs_diff(back, raw) <= 1e-8);
  }
}

TEST_CASE("Borg basis at the zero potential", "[linearized]") {
  const auto zero = Potential::zero();
  const auto e = eigen_data(zero, Flavor::borg, 10);
  const auto b = build_basis(zero, e, Flavor::borg);
  // y_k = sin(rho_k x)/sqrt(rho_k) with rho_k = k/2, so phi_k = sin(k x)/pi.
  for (std::size_t k = 1; k <= 20; ++k) {
    for (std::size_t i = 0; i <= zero.n_grid(); i += 64) {
      CHECK_THAT(b.phi(Eigen::Index(k - 1), Eigen::Index(i)), WithinAbs(std::sin(double(k) * zero.x(i)) / pi, 1e-6));
    }
  }
  CHECK(max_gram_deviation(biorthogonality_gram(b, 20)) <= 1e-6);
  for (double g : b.gamma) {
    CHECK(g >= 0.1);
    CHECK(g <= 10.0);
  }
}

TEST_CASE("biorthogonality on the smooth corpus", "[linearized][property]") {
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    for (unsigned seed : {0u, 71u, 72u}) {
      const auto sigma = seed == 0 ? sin_mode(0.3, 1.0) : Potential::from_function(oracle::smooth_member(seed, 0.4));
      const auto e = eigen_data(sigma, f, 10);
      const auto b = build_basis(sigma, e, f);
      CHECK(max_gram_deviation(biorthogonality_gram(b, 20)) <= 1e-5);
    }
  }
}

TEST_CASE("Gram matrix of phi is well conditioned", "[linearized][property]") {
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    for (unsigned seed : {0u, 73u}) {
      const auto sigma = seed == 0 ? Potential::zero() : Potential::from_function(oracle::smooth_member(seed, 0.4));
      const auto e = eigen_data(sigma, f, 10);
      const auto b = build_basis(sigma, e, f);
      const Eigen::Index m = b.phi.rows();
      Eigen::MatrixXd g(m, m);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
          g(i, j) = inner_product(basis_row(b.phi, std::size_t(i)), basis_row(b.phi, std::size_t(j)), b.step);
        }
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
      const auto& sv = svd.singularValues();
      CHECK(sv(0) / sv(sv.size() - 1) <= 1e4);
    }
  }
}

TEST_CASE("Frechet derivative at zero is the T map", "[linearized][property]") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    const auto zero = Potential::zero();
    const auto e = eigen_data(zero, f, 8);
    const auto b = build_basis(zero, e, f);
    const auto s2 = sin_mode(1.0, 2.0);
    CHECK(oracle::max_abs_diff(frechet_derivative(zero, e, b, s2), t_forward(s2, f, 8)) <= 1e-6);
    for (int trial = 0; trial < 10; ++trial) {
      oracle::SmoothFamily fam;
      fam.a.resize(6);
      for (double& a : fam.a) a = u(rng);
      fam.b = u(rng);
      const auto dir = Potential::from_function(fam);
      CHECK(oracle::max_abs_diff(frechet_derivative(zero, e, b, dir), t_forward(dir, f, 8)) <= 1e-6);
    }
  }
}

TEST_CASE("Frechet derivative matches central differences", "[linearized][property]") {
  const auto sigma = sin_mode(0.3, 1.0);
  const auto dir = sin_mode(1.0, 3.0);
  const double eps = 1e-5;
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    const auto e = eigen_data(sigma, f, 8);
    const auto b = build_basis(sigma, e, f);
    const auto lin = frechet_derivative(sigma, e, b, dir);
    const auto plus = forward_map(sigma + eps * dir, f, 8);
    const auto minus = forward_map(sigma - eps * dir, f, 8);
    for (std::size_t k = 0; k < lin.size(); ++k) {
      CHECK_THAT(lin[k], WithinAbs((plus.s[k] - minus.s[k]) / (2.0 * eps), 1e-4));
    }
  }
}

TEST_CASE("inverse derivative inverts the Frechet derivative on the span", "[linearized][property]") {
  const auto sigma = sin_mode(0.3, 1.0);
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    const auto e = eigen_data(sigma, f, 10);
    const auto b = build_basis(sigma, e, f);
    std::vector<double> coeffs(20, 0.0);
    coeffs[2] = 0.01;
    coeffs[7] = -0.02;
    const auto g = inverse_derivative_apply(b, coeffs, 1.0);
    CHECK(oracle::max_abs_diff(frechet_derivative(sigma, e, b, g), coeffs) <= 1e-6);
  }
}
