// slinv: command-line front end for the forward map, reconstruction,
// isospectral transforms and the stability harness.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "slinv/slinv.hpp"

namespace {

using namespace slinv;

int exit_code(errc code) {
  switch (code) {
    case errc::no_convergence: return 3;
    case errc::omega_violation:
    case errc::interlacing_violation:
    case errc::invalid_potential:
    case errc::invalid_argument:
    case errc::non_positive_lambda:
    case errc::shift_too_negative:
    case errc::t_out_of_range:
    case errc::g_non_positive: return 2;
    default: return 1;
  }
}

std::string sibling_csv(const std::string& json_path) {
  std::filesystem::path p(json_path);
  p.replace_extension(".csv");
  return p.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse Sturm-Liouville problems with distribution potentials"};
  app.require_subcommand(1);

  // forward
  std::string sigma_path, out_path, flavor_text = "borg";
  std::size_t n = 64;
  auto* forward = app.add_subcommand("forward", "Regularized spectral data of a potential");
  forward->add_option("--sigma", sigma_path, "potential CSV (x,sigma)")->required();
  forward->add_option("--flavor", flavor_text, "borg | dirichlet");
  forward->add_option("--n", n, "truncation N");
  forward->add_option("--out", out_path, "data JSON")->required();

  // invert
  std::string data_path;
  double theta = 1.0, tol = 1e-7;
  std::size_t max_iter = 200, grid = default_grid;
  auto* invert = app.add_subcommand("invert", "Reconstruct a potential from regularized data");
  invert->add_option("--data", data_path, "data JSON")->required();
  invert->add_option("--theta", theta, "smoothness index");
  invert->add_option("--tol", tol, "residual tolerance");
  invert->add_option("--max-iter", max_iter, "iteration cap");
  invert->add_option("--grid", grid, "grid intervals of the output");
  invert->add_option("--out", out_path, "output CSV")->required();

  // perturb
  std::string kind = "eigenvalue";
  std::size_t index = 1;
  double t = 0.0;
  auto* perturb = app.add_subcommand("perturb", "Move one Dirichlet eigenvalue or norming constant");
  perturb->add_option("--sigma", sigma_path, "potential CSV")->required();
  perturb->add_option("--kind", kind, "eigenvalue | norming")->check(CLI::IsMember({"eigenvalue", "norming"}));
  perturb->add_option("--index", index, "n (1-based)")->required();
  perturb->add_option("--t", t, "shift of lambda_n or alpha_n")->required();
  perturb->add_option("--out", out_path, "output CSV")->required();

  // stability
  std::string config_path, csv_path;
  auto* stability = app.add_subcommand("stability", "Two-sided stability sweep");
  stability->add_option("--config", config_path, "sweep JSON");
  stability->add_option("--out", out_path, "report JSON")->required();
  stability->add_option("--csv", csv_path, "per-pair CSV (default: report path with .csv)");

  // basis-check
  std::string dump_dir;
  std::size_t basis_n = 10;
  double basis_tol = 1e-5;
  auto* basis = app.add_subcommand("basis-check", "Gram matrix (phi_k, psi_m)");
  basis->add_option("--sigma", sigma_path, "potential CSV")->required();
  basis->add_option("--flavor", flavor_text, "borg | dirichlet");
  basis->add_option("--n", basis_n, "truncation N (2N functions)");
  basis->add_option("--tol", basis_tol, "max |G - I| accepted");
  basis->add_option("--out", out_path, "Gram CSV")->required();
  basis->add_option("--dump", dump_dir, "directory for phi.csv and psi.csv");

  // omega-check
  double r = 1.0, h = 0.1;
  auto* omega = app.add_subcommand("omega-check", "Membership of data in Omega(r, h)");
  omega->set_help_flag("--help", "Print this help message and exit");  // frees -h for the margin
  omega->add_option("--data", data_path, "data JSON")->required();
  omega->add_option("--r", r, "radius")->required();
  omega->add_option("--h", h, "margin")->required();
  omega->add_option("--theta", theta, "smoothness index");

  // build-from-data
  auto* build = app.add_subcommand("build-from-data", "Potential from data by successive one-datum moves");
  build->add_option("--config", config_path, "JSON {flavor, theta, s[], N, tol, max_iter}")->required();
  build->add_option("--out", out_path, "output CSV")->required();

  // omega-image
  auto* image = app.add_subcommand("omega-image", "Omega-image check over nested corpora");
  image->add_option("--config", config_path, "corpus JSON");
  image->add_option("--out", out_path, "report JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (forward->parsed()) {
      const Flavor flavor = parse_flavor(flavor_text);
      const Potential sigma = read_potential(sigma_path);
      const EigenData e = eigen_data(sigma, flavor, n);
      write_json(out_path, data_to_json(e, regularize(e)));
    } else if (invert->parsed()) {
      const RegularizedData data = data_from_json(read_json(data_path));
      ReconstructOptions opts;
      opts.tol = tol;
      opts.max_iter = max_iter;
      opts.n_grid = grid;
      const auto res = reconstruct(data, theta, opts);
      write_potential(out_path, res.sigma);
      std::printf("converged iterations=%zu residual=%.3e newton_steps=%zu shift=%.17g\n", res.iterations,
                  res.residual_norm, res.newton_steps, res.shift_used);
    } else if (perturb->parsed()) {
      const Potential sigma = read_potential(sigma_path);
      const EigenData e = eigen_data(sigma, Flavor::dirichlet, index + 1);
      const Potential out = kind == "eigenvalue" ? perturb_eigenvalue(sigma, e, index, t)
                                                 : perturb_norming(sigma, e, index, t);
      write_potential(out_path, out);
    } else if (stability->parsed()) {
      const nlohmann::json cj = config_path.empty() ? nlohmann::json::object() : read_json(config_path);
      const StabilityConfig cfg = stability_config_from_json(cj);
      const auto rep = stability_sweep(cfg, config_hash(stability_config_to_json(cfg)));
      write_json(out_path, stability_report_to_json(rep));
      write_text(csv_path.empty() ? sibling_csv(out_path) : csv_path, pairs_to_csv(rep.pairs));
      for (const auto& c : rep.cells) {
        std::printf("cell r=%g h=%g valid=%zu/%zu ratio_min=%.6g ratio_max=%.6g\n", c.r, c.h, c.valid, c.samples,
                    c.all.min, c.all.max);
      }
    } else if (basis->parsed()) {
      const Flavor flavor = parse_flavor(flavor_text);
      const Potential sigma = read_potential(sigma_path);
      const EigenData e = eigen_data(sigma, flavor, basis_n);
      const BasisFunctions b = build_basis(sigma, e, flavor);
      const Eigen::MatrixXd g = biorthogonality_gram(b, 2 * basis_n);
      write_text(out_path, matrix_to_csv(g));
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        write_text((std::filesystem::path(dump_dir) / "phi.csv").string(), matrix_to_csv(b.phi));
        write_text((std::filesystem::path(dump_dir) / "psi.csv").string(), matrix_to_csv(b.psi));
      }
      const double dev = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
      std::printf("max |(phi_k, psi_m) - delta_km| = %.3e\n", dev);
      if (dev > basis_tol) return 2;
    } else if (omega->parsed()) {
      const RegularizedData data = data_from_json(read_json(data_path));
      const auto d = omega_membership(data, r, h, theta);
      const nlohmann::json j = {{"member", d.member},         {"h_star", d.h_star},
                                {"norm", d.norm},             {"binding_index", d.binding_index},
                                {"binding_kind", d.binding_kind}, {"lower_ok", d.lower_ok},
                                {"reason", d.reason}};
      std::printf("%s\n", j.dump(2).c_str());
      if (!d.member) return 2;
    } else if (build->parsed()) {
      const nlohmann::json j = read_json(config_path);
      BuildConfig cfg;
      try {
        cfg.flavor = parse_flavor(j.at("flavor").get<std::string>());
        cfg.theta = j.value("theta", 1.0);
        cfg.s = j.at("s").get<std::vector<double>>();
        cfg.n = j.value("N", cfg.s.size() / 2);
        cfg.tol = j.value("tol", 1e-7);
        cfg.max_iter = j.value("max_iter", std::size_t{200});
      } catch (const nlohmann::json::exception& e) {
        throw error(errc::invalid_argument, std::string("malformed config: ") + e.what());
      }
      const auto res = build_from_data(cfg);
      write_potential(out_path, res.sigma);
      std::printf("method=%s moves=%zu residual=%.3e\n", res.method.c_str(), res.moves, res.residual_norm);
    } else if (image->parsed()) {
      const nlohmann::json cj = config_path.empty() ? nlohmann::json::object() : read_json(config_path);
      const OmegaImageConfig cfg = omega_config_from_json(cj);
      const auto rep = omega_image_check(cfg, config_hash(omega_config_to_json(cfg)));
      write_json(out_path, omega_report_to_json(rep));
      for (const auto& rr : rep.radii) {
        std::printf("R=%g samples=%zu passed=%zu h(R)=%.6g r(R)=%.6g\n", rr.radius, rr.samples, rr.passed,
                    rr.h_of_radius, rr.r_of_radius);
      }
      if (!rep.all_pass) return 2;
    }
  } catch (const error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  return 0;
}
