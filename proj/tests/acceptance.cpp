// Acceptance run: one PASS/FAIL line per criterion, each with its pinned
// tolerance and wall-clock budget. Reports are written to ./acceptance_out.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "slinv/slinv.hpp"

using namespace slinv;

namespace {

const std::filesystem::path out_dir = "acceptance_out";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.1f s / %.0f s%s]\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              budget_s, in_time ? "" : " exceeded");
  std::fflush(stdout);
}

Potential mode(double a, double k, double c = 0.0) {
  return Potential::from_function([=](double x) { return c + a * std::sin(k * x); });
}

// 1. Zero-potential spectra.
Outcome zero_spectra() {
  const auto zero = Potential::zero();
  const auto b = eigen_data(zero, Flavor::borg, 20);
  const auto d = eigen_data(zero, Flavor::dirichlet, 20);
  double err = 0.0;
  for (std::size_t k = 1; k <= 20; ++k) {
    err = std::max(err, std::abs(b.lambda[k - 1] - double(k * k)));
    err = std::max(err, std::abs(b.mu[k - 1] - (k - 0.5) * (k - 0.5)));
    err = std::max(err, std::abs(d.alpha[k - 1] - pi / 2));
  }
  return {err <= 1e-8, "max error " + fmt("%.2e", err) + " (tol 1e-8, k <= 20)"};
}

// 2. Shift covariance on 10 random smooth potentials.
Outcome shift_covariance() {
  CorpusConfig cfg;
  cfg.seed = 101;
  cfg.n = 16;
  cfg.n_grid = default_grid;
  double err = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    // The offset keeps every eigenvalue of sigma - (x - pi) positive.
    const auto base = shift_potential(sample_potential(cfg, 1, i, 0.0, 1.0).sigma, 1.5);
    const auto e = eigen_data(base, Flavor::borg, 16);
    for (double c : {-1.0, 3.0}) {
      const auto s = eigen_data(shift_potential(base, c), Flavor::borg, 16);
      for (std::size_t k = 0; k < 16; ++k) {
        err = std::max(err, std::abs(s.lambda[k] - e.lambda[k] - c));
        err = std::max(err, std::abs(s.mu[k] - e.mu[k] - c));
      }
    }
  }
  return {err <= 1e-6, "max |spectra(sigma + c(x-pi)) - spectra(sigma) - c| = " + fmt("%.2e", err) + " (tol 1e-6)"};
}

// 3. Finite-difference Jacobian of F at zero against the T matrices.
Outcome linearization_at_zero() {
  const std::size_t n = 8;  // 2N = 16 data entries
  const double eps = 1e-6;
  std::vector<Potential> dirs;
  for (int j = 1; j <= 16; ++j) dirs.push_back(mode(1.0, j));
  for (int j = 1; j <= 8; ++j) dirs.push_back(Potential::from_function([=](double x) { return std::cos(j * x); }));
  double worst = 0.0;
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    Eigen::MatrixXd jac(2 * n, dirs.size()), t(2 * n, dirs.size());
    for (std::size_t c = 0; c < dirs.size(); ++c) {
      const auto plus = forward_map(eps * dirs[c], f, n);
      const auto minus = forward_map((-eps) * dirs[c], f, n);
      const auto tc = t_forward(dirs[c], f, n);
      for (std::size_t k = 0; k < 2 * n; ++k) {
        jac(Eigen::Index(k), Eigen::Index(c)) = (plus.s[k] - minus.s[k]) / (2.0 * eps);
        t(Eigen::Index(k), Eigen::Index(c)) = tc[k];
      }
    }
    worst = std::max(worst, (jac - t).norm() / t.norm());
  }
  return {worst <= 1e-4, "relative Frobenius error " + fmt("%.2e", worst) + " (tol 1e-4, k <= 16, both flavors)"};
}

// 4. Biorthogonality.
Outcome biorthogonality() {
  double worst = 0.0;
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    for (const auto& sigma : {Potential::zero(), mode(0.3, 1.0)}) {
      const auto e = eigen_data(sigma, f, 10);
      const auto g = biorthogonality_gram(build_basis(sigma, e, f), 20);
      worst = std::max(worst, (g - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-5, "max |(phi_k, psi_m) - delta_km| = " + fmt("%.2e", worst) + " (tol 1e-5, k, m <= 20)"};
}

// 5. Isospectral transforms on the zero potential.
Outcome isospectral_moves() {
  const auto zero = Potential::zero();
  const auto e = eigen_data(zero, Flavor::dirichlet, 8);
  const auto a = eigen_data(perturb_eigenvalue(zero, e, 1, 0.5), Flavor::dirichlet, 8);
  const auto b = eigen_data(perturb_norming(zero, e, 1, 0.5), Flavor::dirichlet, 8);
  double err = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    const double lk = double(k * k);
    err = std::max(err, std::abs(a.lambda[k - 1] - (k == 1 ? lk + 0.5 : lk)));
    err = std::max(err, std::abs(a.alpha[k - 1] - pi / 2));
    err = std::max(err, std::abs(b.lambda[k - 1] - lk));
    err = std::max(err, std::abs(b.alpha[k - 1] - (k == 1 ? pi / 2 + 0.5 : pi / 2)));
  }
  return {err <= 1e-6, "max spectral/norming error " + fmt("%.2e", err) + " (tol 1e-6, k <= 8)"};
}

// 6. Round-trip reconstruction.
Outcome round_trip() {
  std::size_t ok = 0, total = 0, max_iter = 0;
  double worst = 0.0;
  for (Flavor f : {Flavor::borg, Flavor::dirichlet}) {
    CorpusConfig cfg;
    cfg.flavor = f;
    cfg.n = 64;
    cfg.n_grid = default_grid;
    std::vector<double> rel(20, 0.0);
    std::vector<std::size_t> iters(20, 0);
    std::vector<int> good(20, 0);
    parallel_for(20, [&](std::size_t i) {
      const auto smp = sample_potential(cfg, 600, i, 0.0, 1.0);
      const auto data = forward_map(smp.sigma, f, cfg.n);
      const auto res = reconstruct(data, 1.0);
      const double dist = sobolev_distance(res.sigma, smp.sigma, 1.0, f, cfg.n);
      rel[i] = dist / (1.0 + smp.norm);
      iters[i] = res.iterations;
      good[i] = res.converged && res.iterations <= 200 && rel[i] <= 1e-5;
    });
    for (std::size_t i = 0; i < 20; ++i) {
      ++total;
      ok += static_cast<std::size_t>(good[i]);
      worst = std::max(worst, rel[i]);
      max_iter = std::max(max_iter, iters[i]);
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " within 1e-5 (1 + ||sigma||_1), worst " +
                           fmt("%.2e", worst) + ", max iterations " + std::to_string(max_iter)};
}

// 7. Interlacing over the randomized corpus.
Outcome interlacing() {
  CorpusConfig cfg;
  cfg.n = 32;
  std::size_t solved = 0;
  const std::size_t count = 240;
  const std::size_t violations = interlacing_scan(cfg, count, 2.0, &solved);
  return {violations == 0 && solved == count,
          std::to_string(violations) + " violations, " + std::to_string(solved) + "/" + std::to_string(count) +
              " potentials solved"};
}

StabilityConfig stability_config(Flavor f) {
  StabilityConfig cfg;
  cfg.corpus.flavor = f;
  cfg.corpus.theta = 1.0;
  cfg.corpus.n = 32;
  cfg.corpus.n_grid = 1024;
  cfg.cells = {{1.0, 0.1}};
  cfg.samples = 50;
  return cfg;
}

void write_stability(const StabilityConfig& cfg, const std::string& stem) {
  const auto rep = stability_sweep(cfg, config_hash(stability_config_to_json(cfg)));
  write_json((out_dir / (stem + ".json")).string(), stability_report_to_json(rep));
  write_text((out_dir / (stem + ".csv")).string(), pairs_to_csv(rep.pairs));
}

// 8. Two-sided stability.
Outcome stability() {
  const auto borg_cfg = stability_config(Flavor::borg);
  const auto dir_cfg = stability_config(Flavor::dirichlet);
  const auto b = stability_sweep(borg_cfg, config_hash(stability_config_to_json(borg_cfg)));
  const auto d = stability_sweep(dir_cfg, config_hash(stability_config_to_json(dir_cfg)));
  write_json((out_dir / "stability_borg.json").string(), stability_report_to_json(b));
  write_text((out_dir / "stability_borg.csv").string(), pairs_to_csv(b.pairs));
  write_json((out_dir / "stability_dirichlet.json").string(), stability_report_to_json(d));
  write_text((out_dir / "stability_dirichlet.csv").string(), pairs_to_csv(d.pairs));

  auto finite = [](const StabilityReport& r) {
    for (const auto& p : r.pairs) {
      if (p.valid && !(std::isfinite(p.ratio) && p.ratio > 0.0)) return false;
    }
    return true;
  };
  const auto& bc = b.cells[0];
  const auto& dc = d.cells[0];
  const bool cells_ok = finite(b) && finite(d) && bc.valid > 0 && dc.valid > 0 && bc.all.spread() <= 1e3 &&
                        dc.all.spread() <= 1e3;
  const bool near_zero_ok = b.near_zero.valid > 0 && b.near_zero.max_factor <= 2.0;
  const bool collision_ok = d.collision.evaluated && d.collision.valid >= 2 &&
                            d.collision.ratios.spread() > dc.all.spread();
  std::string detail = "borg cell " + std::to_string(bc.valid) + "/" + std::to_string(bc.samples) + " spread " +
                       fmt("%.3g", bc.all.spread()) + "; dirichlet cell " + std::to_string(dc.valid) + "/" +
                       std::to_string(dc.samples) + " spread " + fmt("%.3g", dc.all.spread()) +
                       " (tol 1e3); near-zero factor " + fmt("%.3f", b.near_zero.max_factor) +
                       " (tol 2); near-collision spread " + fmt("%.3g", d.collision.ratios.spread()) + " vs " +
                       fmt("%.3g", dc.all.spread()) + ", h* down to " + fmt("%.3g", d.collision.h_star_min);
  return {cells_ok && near_zero_ok && collision_ok, detail};
}

OmegaImageConfig omega_config() {
  OmegaImageConfig cfg;
  cfg.corpus.n = 32;
  cfg.corpus.n_grid = 1024;
  cfg.radii = {0.5, 1.0, 2.0};
  cfg.samples = 50;
  cfg.reverse_samples = 5;
  return cfg;
}

// 9. Omega-image checks.
Outcome omega_image() {
  const auto cfg = omega_config();
  const auto rep = omega_image_check(cfg, config_hash(omega_config_to_json(cfg)));
  write_json((out_dir / "omega_image.json").string(), omega_report_to_json(rep));
  std::size_t in_ball = 0, passed = 0;
  for (const auto& r : rep.records) {
    if (r.norm > 1.0) continue;
    ++in_ball;
    if (r.pass && r.h_star > 0.0) ++passed;
  }
  std::string detail = std::to_string(passed) + "/" + std::to_string(in_ball) + " with ||sigma||_1 <= 1 pass; h(R) =";
  for (const auto& rr : rep.radii) detail += " " + fmt("%.4g", rr.h_of_radius);
  detail += rep.h_monotone ? " (non-increasing)" : " (increasing)";
  return {in_ball > 0 && passed == in_ball && rep.h_monotone, detail};
}

// 10. Determinism: rerun and compare bytes.
Outcome determinism() {
  const auto cfg = stability_config(Flavor::borg);
  write_stability(cfg, "rerun_stability_borg");
  const auto ocfg = omega_config();
  const auto rep = omega_image_check(ocfg, config_hash(omega_config_to_json(ocfg)));
  write_json((out_dir / "rerun_omega_image.json").string(), omega_report_to_json(rep));
  const std::vector<std::pair<std::string, std::string>> files{
      {"stability_borg.json", "rerun_stability_borg.json"},
      {"stability_borg.csv", "rerun_stability_borg.csv"},
      {"omega_image.json", "rerun_omega_image.json"}};
  std::size_t same = 0;
  for (const auto& [a, b] : files) {
    if (read_text((out_dir / a).string()) == read_text((out_dir / b).string())) ++same;
  }
  return {same == files.size(), std::to_string(same) + "/" + std::to_string(files.size()) + " reports byte-identical"};
}

}  // namespace

int main() {
  std::filesystem::create_directories(out_dir);
  criterion(1, "zero-potential spectra", 1.0, zero_spectra);
  criterion(2, "shift covariance", 10.0, shift_covariance);
  criterion(3, "linearization at zero", 30.0, linearization_at_zero);
  criterion(4, "biorthogonality", 60.0, biorthogonality);
  criterion(5, "isospectral transforms", 30.0, isospectral_moves);
  criterion(6, "round-trip reconstruction", 300.0, round_trip);
  criterion(7, "interlacing", 300.0, interlacing);
  criterion(8, "two-sided stability", 600.0, stability);
  criterion(9, "omega image", 300.0, omega_image);
  criterion(10, "determinism", 900.0, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
