#pragma once

// Randomized corpora, two-sided stability sweeps and Omega-image checks.
// Every random draw comes from a generator seeded by (seed, stream, index), so
// results do not depend on evaluation order or thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "slinv/error.hpp"
#include "slinv/inverse.hpp"
#include "slinv/linearized.hpp"
#include "slinv/norm.hpp"
#include "slinv/parallel.hpp"
#include "slinv/potential.hpp"
#include "slinv/seqspace.hpp"
#include "slinv/spectra.hpp"

namespace slinv {

// ---------------------------------------------------------------------------
// Corpus.

struct CorpusConfig {
  std::uint64_t seed = 20240917;
  double theta = 1.0;
  Flavor flavor = Flavor::borg;
  std::size_t terms = 16;
  std::size_t n = 32;
  std::size_t n_grid = 1024;
  std::size_t max_attempts = 400;
};

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// sum_j a_j sin(j x) + b (x - pi).
inline Potential sine_series(const std::vector<double>& a, double b, std::size_t n_grid, double theta) {
  return Potential::from_function(
      [&](double x) {
        double v = b * (x - pi);
        for (std::size_t j = 1; j <= a.size(); ++j) v += a[j - 1] * std::sin(static_cast<double>(j) * x);
        return v;
      },
      n_grid, theta);
}

inline bool admissible(const Potential& sigma, Flavor flavor) {
  const double eta = flavor == Flavor::borg ? eta_borg : eta_dirichlet;
  return lowest_eigenvalue(Propagator(sigma), flavor) >= eta;
}

struct CorpusSample {
  Potential sigma = Potential::zero(min_grid);
  double norm = 0.0;
  std::size_t attempts = 0;
};

/// Admissible sine-series potential with ||sigma||_theta drawn uniformly in
/// [norm_lo, norm_hi]; a_j ~ U(-1, 1) j^{-theta-1/2}, b ~ U(-1, 1).
inline CorpusSample sample_potential(const CorpusConfig& cfg, std::uint64_t stream, std::uint64_t index,
                                     double norm_lo, double norm_hi) {
  auto rng = stream_rng(cfg.seed, stream, index);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(norm_lo, norm_hi);
  const double target = radius(rng);
  CorpusSample out;
  if (target == 0.0) {
    out.sigma = Potential::zero(cfg.n_grid, cfg.theta);
    out.attempts = 1;
    return out;
  }
  for (std::size_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    std::vector<double> a(cfg.terms);
    for (std::size_t j = 1; j <= cfg.terms; ++j) {
      a[j - 1] = unit(rng) * std::pow(static_cast<double>(j), -cfg.theta - 0.5);
    }
    const double b = unit(rng);
    const Potential raw = sine_series(a, b, cfg.n_grid, cfg.theta);
    const double nr = sobolev_norm(raw, cfg.theta, cfg.flavor, cfg.n);
    if (!(nr > 0.0)) continue;
    const Potential sigma = (target / nr) * raw;
    if (!admissible(sigma, cfg.flavor)) continue;
    out.sigma = sigma;
    out.norm = sobolev_norm(sigma, cfg.theta, cfg.flavor, cfg.n);
    out.attempts = attempt;
    return out;
  }
  throw error(errc::invalid_argument, "no admissible potential after " + std::to_string(cfg.max_attempts) +
                                          " draws at norm " + std::to_string(target));
}

/// Random regularized data in Omega^theta(r, h): tail entries U(-1, 1) p^{-theta-1/2}
/// plus U(-1, 1) special coefficients, scaled to a norm drawn in [0, r].
inline RegularizedData sample_data(const CorpusConfig& cfg, std::uint64_t stream, std::uint64_t index, double r,
                                   double h) {
  auto rng = stream_rng(cfg.seed, stream, index);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, r);
  const std::size_t len = 2 * cfg.n;
  for (std::size_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    ExtSeq x;
    x.theta = cfg.theta;
    x.flavor = cfg.flavor;
    x.n = cfg.n;
    x.tail.resize(len);
    for (std::size_t p = 1; p <= len; ++p) x.tail[p - 1] = unit(rng) * std::pow(static_cast<double>(p), -cfg.theta - 0.5);
    x.special.resize(special_count(cfg.theta, cfg.flavor));
    for (double& c : x.special) c = unit(rng);
    std::vector<double> raw = recombine(x);
    const double nr = data_norm(raw, cfg.theta, cfg.flavor);
    const double target = radius(rng);
    if (!(nr > 0.0)) continue;
    for (double& v : raw) v *= target / nr;
    RegularizedData d{cfg.flavor, cfg.n, raw};
    if (omega_membership(d, r, h, cfg.theta).member) return d;
  }
  throw error(errc::omega_violation, "no data drawn inside Omega after " + std::to_string(cfg.max_attempts) + " draws");
}

// ---------------------------------------------------------------------------
// Stability sweep.

struct StabilityCell {
  double r = 1.0;
  double h = 0.1;
};

struct StabilityConfig {
  CorpusConfig corpus;
  std::vector<StabilityCell> cells{{1.0, 0.1}};
  std::size_t samples = 50;
  bool inverse_direction = true;
  double near_zero_radius = 0.1;
  std::size_t near_zero_samples = 10;
  bool near_collision = true;
  std::size_t collision_index = 1;
  std::vector<double> collision_fractions{0.5, 0.7, 0.8, 0.9, 0.95};
  double collision_step = 0.01;
  double tol = 1e-7;
  std::size_t max_iter = 200;
};

struct PairRecord {
  std::string family;     // "cell", "near_zero", "near_collision"
  std::string direction;  // "forward" (sigma pairs) or "inverse" (data pairs)
  double r = 0.0;
  double h = 0.0;
  std::size_t index = 0;
  double dist_sigma = 0.0;
  double dist_data = 0.0;
  double ratio = 0.0;
  double linearized = 0.0;  // ||sigma - sigma_1|| / ||T(sigma - sigma_1)||
  bool valid = false;
  std::string note;
};

namespace detail {

inline PairRecord pair_record(std::string family, std::string direction, double r, double h, std::size_t index) {
  PairRecord p;
  p.family = std::move(family);
  p.direction = std::move(direction);
  p.r = r;
  p.h = h;
  p.index = index;
  return p;
}

}  // namespace detail

struct RatioStats {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double spread() const { return count > 0 && min > 0.0 ? max / min : std::numeric_limits<double>::infinity(); }
};

inline RatioStats ratio_stats(const std::vector<PairRecord>& pairs, const std::string& family, double r, double h,
                              const std::string& direction = "") {
  std::vector<double> v;
  for (const auto& p : pairs) {
    if (!p.valid || p.family != family || p.r != r || p.h != h) continue;
    if (!direction.empty() && p.direction != direction) continue;
    v.push_back(p.ratio);
  }
  RatioStats s;
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  s.median = v.size() % 2 == 1 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  return s;
}

struct CellReport {
  double r = 0.0;
  double h = 0.0;
  std::size_t samples = 0;
  std::size_t valid = 0;
  std::size_t excluded = 0;
  RatioStats all, forward, inverse;
};

struct NearZeroReport {
  std::size_t samples = 0;
  std::size_t valid = 0;
  RatioStats ratios;
  double max_factor = 0.0;  // max over pairs of max(ratio/lin, lin/ratio)
};

struct CollisionReport {
  bool evaluated = false;
  std::size_t index = 0;
  std::size_t valid = 0;
  RatioStats ratios;
  double h_star_min = 0.0;
  std::vector<double> h_star;
};

struct StabilityReport {
  Flavor flavor = Flavor::borg;
  double theta = 1.0;
  std::size_t n = 0;
  std::uint64_t corpus_seed = 0;
  std::string config_hash;
  std::vector<CellReport> cells;
  NearZeroReport near_zero;
  CollisionReport collision;
  std::vector<PairRecord> pairs;
};

namespace detail {

inline std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

inline constexpr double degenerate_distance = 1e-13;

/// Fills distances and ratio of a pair given both potentials and both data.
inline void measure_pair(PairRecord& rec, const Potential& s0, const Potential& s1, const RegularizedData& d0,
                         const RegularizedData& d1, const CorpusConfig& cfg) {
  rec.dist_sigma = sobolev_distance(s0, s1, cfg.theta, cfg.flavor, cfg.n);
  rec.dist_data = data_norm(difference(d0.s, d1.s), cfg.theta, cfg.flavor);
  if (!(rec.dist_sigma > degenerate_distance) || !(rec.dist_data > degenerate_distance)) {
    rec.valid = false;
    rec.note = "degenerate pair";
    return;
  }
  rec.ratio = rec.dist_sigma / rec.dist_data;
  rec.linearized = rec.dist_sigma / data_norm(t_forward(s0 - s1, cfg.flavor, cfg.n), cfg.theta, cfg.flavor);
  rec.valid = std::isfinite(rec.ratio);
  if (!rec.valid) rec.note = "non-finite ratio";
}

inline ReconstructOptions recon_options(const StabilityConfig& cfg) {
  ReconstructOptions o;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.n_grid = cfg.corpus.n_grid;
  return o;
}

inline void forward_pair(PairRecord& rec, const CorpusConfig& cfg, std::uint64_t stream, double radius,
                         const StabilityCell* cell) {
  try {
    const auto a = sample_potential(cfg, stream, 2 * rec.index, 0.0, radius);
    const auto b = sample_potential(cfg, stream, 2 * rec.index + 1, 0.0, radius);
    const auto da = forward_map(a.sigma, cfg.flavor, cfg.n);
    const auto db = forward_map(b.sigma, cfg.flavor, cfg.n);
    if (cell) {
      const bool in_a = omega_membership(da, cell->r, cell->h, cfg.theta).member;
      const bool in_b = omega_membership(db, cell->r, cell->h, cfg.theta).member;
      if (!in_a || !in_b) {
        rec.valid = false;
        rec.note = "image outside cell";
        return;
      }
    }
    measure_pair(rec, a.sigma, b.sigma, da, db, cfg);
  } catch (const error& e) {
    rec.valid = false;
    rec.note = e.what();
  }
}

inline void inverse_pair(PairRecord& rec, const StabilityConfig& scfg, std::uint64_t stream, const StabilityCell& cell) {
  const CorpusConfig& cfg = scfg.corpus;
  try {
    const auto da = sample_data(cfg, stream, 2 * rec.index, cell.r, cell.h);
    const auto db = sample_data(cfg, stream, 2 * rec.index + 1, cell.r, cell.h);
    const auto opts = recon_options(scfg);
    const auto ra = reconstruct(da, cfg.theta, opts);
    const auto rb = reconstruct(db, cfg.theta, opts);
    measure_pair(rec, ra.sigma, rb.sigma, da, db, cfg);
  } catch (const error& e) {
    rec.valid = false;
    rec.note = e.what();
  }
}

}  // namespace detail

/// sigma_f = perturb_eigenvalue(0, n, f (lambda_{n+1} - lambda_n)): lambda_n is
/// pushed toward lambda_{n+1} with all norming constants fixed, so the Dirichlet
/// margin h* = sqrt(lambda_{n+1}) - sqrt(lambda_n) tends to 0 as f -> 1. The
/// Dirichlet-Neumann spectrum of these potentials leaves the admissible class
/// (mu_1 < 0), so the family is evaluated in the Dirichlet flavor only.
inline std::vector<Potential> near_collision_family(const CorpusConfig& cfg, std::size_t n,
                                                    const std::vector<double>& fractions) {
  const Potential base = Potential::zero(cfg.n_grid, cfg.theta);
  const EigenData e = eigen_data(base, Flavor::dirichlet, n + 1);
  const double window = e.lambda[n] - e.lambda[n - 1];
  std::vector<Potential> out;
  for (double f : fractions) out.push_back(perturb_eigenvalue(base, e, n, f * window));
  return out;
}

inline StabilityReport stability_sweep(const StabilityConfig& cfg, const std::string& config_hash = "") {
  if (!(cfg.corpus.theta > 0.0)) throw error(errc::invalid_argument, "theta must be positive");
  if (cfg.cells.empty()) throw error(errc::invalid_argument, "no cells");
  StabilityReport rep;
  rep.flavor = cfg.corpus.flavor;
  rep.theta = cfg.corpus.theta;
  rep.n = cfg.corpus.n;
  rep.corpus_seed = cfg.corpus.seed;
  rep.config_hash = config_hash;

  // Cells: forward pairs then inverse pairs.
  std::vector<PairRecord> pairs;
  for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      pairs.push_back(detail::pair_record("cell", "forward", cfg.cells[c].r, cfg.cells[c].h, i));
    }
    if (cfg.inverse_direction) {
      for (std::size_t i = 0; i < cfg.samples; ++i) {
        pairs.push_back(detail::pair_record("cell", "inverse", cfg.cells[c].r, cfg.cells[c].h, i));
      }
    }
  }
  for (std::size_t i = 0; i < cfg.near_zero_samples; ++i) {
    pairs.push_back(detail::pair_record("near_zero", "forward", cfg.near_zero_radius, 0.0, i));
  }
  const std::size_t cell_pairs = pairs.size();

  parallel_for(cell_pairs, [&](std::size_t k) {
    PairRecord& rec = pairs[k];
    if (rec.family == "near_zero") {
      detail::forward_pair(rec, cfg.corpus, 900, cfg.near_zero_radius, nullptr);
      return;
    }
    std::size_t cell_index = 0;
    for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
      if (cfg.cells[c].r == rec.r && cfg.cells[c].h == rec.h) cell_index = c;
    }
    const auto& cell = cfg.cells[cell_index];
    if (rec.direction == "forward") {
      detail::forward_pair(rec, cfg.corpus, 100 + 2 * cell_index, cell.r, &cell);
    } else {
      detail::inverse_pair(rec, cfg, 101 + 2 * cell_index, cell);
    }
  });

  if (cfg.near_collision && cfg.corpus.flavor == Flavor::dirichlet && !cfg.collision_fractions.empty()) {
    rep.collision.evaluated = true;
    rep.collision.index = cfg.collision_index;
    const auto& fr = cfg.collision_fractions;
    std::vector<double> behind;
    for (double f : fr) behind.push_back(f - cfg.collision_step);
    std::vector<PairRecord> cp(fr.size());
    rep.collision.h_star.assign(fr.size(), 0.0);
    const auto family = near_collision_family(cfg.corpus, cfg.collision_index, fr);
    const auto trailing = near_collision_family(cfg.corpus, cfg.collision_index, behind);
    parallel_for(fr.size(), [&](std::size_t i) {
      PairRecord& rec = cp[i];
      rec.family = "near_collision";
      rec.direction = "forward";
      rec.r = fr[i];
      rec.index = i;
      try {
        const auto da = forward_map(family[i], cfg.corpus.flavor, cfg.corpus.n);
        const auto db = forward_map(trailing[i], cfg.corpus.flavor, cfg.corpus.n);
        constexpr double huge_radius = std::numeric_limits<double>::max();
        rep.collision.h_star[i] = omega_membership(da, huge_radius, 1e-12, cfg.corpus.theta).h_star;
        rec.h = rep.collision.h_star[i];
        detail::measure_pair(rec, family[i], trailing[i], da, db, cfg.corpus);
      } catch (const error& e) {
        rec.valid = false;
        rec.note = e.what();
      }
    });
    std::vector<double> v;
    for (const auto& p : cp) {
      if (p.valid) v.push_back(p.ratio);
    }
    rep.collision.valid = v.size();
    if (!v.empty()) {
      std::sort(v.begin(), v.end());
      rep.collision.ratios = {v.size(), v.front(), v.back(),
                              v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2])};
    }
    rep.collision.h_star_min = *std::min_element(rep.collision.h_star.begin(), rep.collision.h_star.end());
    for (auto& p : cp) p.h = 0.0;
    pairs.insert(pairs.end(), cp.begin(), cp.end());
  }

  for (const auto& cell : cfg.cells) {
    CellReport cr;
    cr.r = cell.r;
    cr.h = cell.h;
    for (const auto& p : pairs) {
      if (p.family != "cell" || p.r != cell.r || p.h != cell.h) continue;
      ++cr.samples;
      if (p.valid) ++cr.valid;
      else ++cr.excluded;
    }
    cr.all = ratio_stats(pairs, "cell", cell.r, cell.h);
    cr.forward = ratio_stats(pairs, "cell", cell.r, cell.h, "forward");
    cr.inverse = ratio_stats(pairs, "cell", cell.r, cell.h, "inverse");
    rep.cells.push_back(cr);
  }

  rep.near_zero.samples = cfg.near_zero_samples;
  rep.near_zero.ratios = ratio_stats(pairs, "near_zero", cfg.near_zero_radius, 0.0);
  rep.near_zero.valid = rep.near_zero.ratios.count;
  for (const auto& p : pairs) {
    if (p.family != "near_zero" || !p.valid) continue;
    rep.near_zero.max_factor = std::max(rep.near_zero.max_factor, std::max(p.ratio / p.linearized, p.linearized / p.ratio));
  }
  rep.pairs = std::move(pairs);
  return rep;
}

// ---------------------------------------------------------------------------
// Omega-image check.

struct OmegaImageConfig {
  CorpusConfig corpus;
  std::vector<double> radii{0.5, 1.0, 2.0};
  std::size_t samples = 50;  // per shell (R_{i-1}, R_i]
  std::size_t reverse_samples = 5;
  double tol = 1e-7;
  std::size_t max_iter = 200;
};

struct OmegaRecord {
  std::size_t shell = 0;
  std::size_t index = 0;
  double norm = 0.0;
  double h_star = 0.0;
  double r_star = 0.0;
  std::string binding;
  bool pass = false;
  bool interlacing_ok = true;
  double reverse_norm = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

struct OmegaRadiusReport {
  double radius = 0.0;
  std::size_t samples = 0;
  std::size_t passed = 0;
  double r_of_radius = 0.0;  // max r*
  double h_of_radius = 0.0;  // min h*
  double reverse_radius = 0.0;  // max ||F^{-1}(F(sigma))|| over reconstructed members
  std::size_t reverse_samples = 0;
};

struct OmegaImageReport {
  Flavor flavor = Flavor::borg;
  double theta = 1.0;
  std::size_t n = 0;
  std::uint64_t corpus_seed = 0;
  std::string config_hash;
  std::vector<OmegaRadiusReport> radii;
  bool all_pass = true;
  bool h_monotone = true;
  std::size_t interlacing_violations = 0;
  std::vector<OmegaRecord> records;
};

/// Corpora are nested: the corpus for R_i is the union of shells
/// (R_{j-1}, R_j], j <= i, so h(R) is taken over growing sets.
inline OmegaImageReport omega_image_check(const OmegaImageConfig& cfg, const std::string& config_hash = "") {
  if (!(cfg.corpus.theta > 0.0)) throw error(errc::invalid_argument, "theta must be positive");
  std::vector<double> radii = cfg.radii;
  std::sort(radii.begin(), radii.end());
  OmegaImageReport rep;
  rep.flavor = cfg.corpus.flavor;
  rep.theta = cfg.corpus.theta;
  rep.n = cfg.corpus.n;
  rep.corpus_seed = cfg.corpus.seed;
  rep.config_hash = config_hash;

  std::vector<OmegaRecord> recs;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      OmegaRecord r;
      r.shell = s;
      r.index = i;
      recs.push_back(r);
    }
  }
  constexpr double huge_radius = std::numeric_limits<double>::max();
  parallel_for(recs.size(), [&](std::size_t k) {
    OmegaRecord& rec = recs[k];
    const double lo = rec.shell == 0 ? 0.0 : radii[rec.shell - 1];
    try {
      const auto smp = sample_potential(cfg.corpus, 500 + rec.shell, rec.index, lo, radii[rec.shell]);
      rec.norm = smp.norm;
      const auto data = forward_map(smp.sigma, cfg.corpus.flavor, cfg.corpus.n);
      const auto d = omega_membership(data, huge_radius, 1e-12, cfg.corpus.theta);
      rec.h_star = d.h_star;
      rec.r_star = d.norm;
      rec.binding = d.binding_kind + ":" + std::to_string(d.binding_index);
      rec.pass = d.lower_ok && d.h_star > 0.0;
      if (rec.pass && rec.index < cfg.reverse_samples) {
        ReconstructOptions o;
        o.tol = cfg.tol;
        o.max_iter = cfg.max_iter;
        o.n_grid = cfg.corpus.n_grid;
        const auto back = reconstruct(data, cfg.corpus.theta, o);
        rec.reverse_norm = sobolev_norm(back.sigma, cfg.corpus.theta, cfg.corpus.flavor, cfg.corpus.n);
      }
    } catch (const error& e) {
      rec.pass = false;
      rec.note = e.what();
      if (e.code() == errc::interlacing_violation) rec.interlacing_ok = false;
    }
  });

  for (std::size_t s = 0; s < radii.size(); ++s) {
    OmegaRadiusReport rr;
    rr.radius = radii[s];
    rr.h_of_radius = std::numeric_limits<double>::infinity();
    for (const auto& rec : recs) {
      if (rec.shell > s) continue;
      ++rr.samples;
      if (rec.pass) ++rr.passed;
      rr.r_of_radius = std::max(rr.r_of_radius, rec.r_star);
      rr.h_of_radius = std::min(rr.h_of_radius, rec.h_star);
      if (std::isfinite(rec.reverse_norm)) {
        ++rr.reverse_samples;
        rr.reverse_radius = std::max(rr.reverse_radius, rec.reverse_norm);
      }
    }
    rep.radii.push_back(rr);
  }
  for (const auto& rec : recs) {
    if (!rec.pass) rep.all_pass = false;
    if (!rec.interlacing_ok) ++rep.interlacing_violations;
  }
  for (std::size_t s = 1; s < rep.radii.size(); ++s) {
    if (rep.radii[s].h_of_radius > rep.radii[s - 1].h_of_radius) rep.h_monotone = false;
  }
  rep.records = std::move(recs);
  return rep;
}

/// Forward solves over `count` corpus potentials with norms in [0, radius];
/// returns the number that raised InterlacingViolation.
inline std::size_t interlacing_scan(const CorpusConfig& cfg, std::size_t count, double radius,
                                    std::size_t* solved = nullptr) {
  std::vector<int> status(count, 0);  // 0 ok, 1 violation, 2 other failure
  parallel_for(count, [&](std::size_t i) {
    try {
      const auto smp = sample_potential(cfg, 700, i, 0.0, radius);
      (void)eigen_data(smp.sigma, Flavor::borg, cfg.n);
    } catch (const error& e) {
      status[i] = e.code() == errc::interlacing_violation ? 1 : 2;
    }
  });
  if (solved) *solved = static_cast<std::size_t>(std::count(status.begin(), status.end(), 0));
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), 1));
}

// ---------------------------------------------------------------------------
// JSON forms and hashing.

inline std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

inline nlohmann::json corpus_to_json(const CorpusConfig& c) {
  return {{"seed", c.seed},         {"theta", c.theta}, {"flavor", flavor_name(c.flavor)}, {"terms", c.terms},
          {"N", c.n},               {"n_grid", c.n_grid}, {"max_attempts", c.max_attempts}};
}

inline CorpusConfig corpus_from_json(const nlohmann::json& j, CorpusConfig c = {}) {
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("theta")) c.theta = j.at("theta").get<double>();
  if (j.contains("flavor")) c.flavor = parse_flavor(j.at("flavor").get<std::string>());
  if (j.contains("terms")) c.terms = j.at("terms").get<std::size_t>();
  if (j.contains("N")) c.n = j.at("N").get<std::size_t>();
  if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::size_t>();
  if (j.contains("max_attempts")) c.max_attempts = j.at("max_attempts").get<std::size_t>();
  return c;
}

inline nlohmann::json stability_config_to_json(const StabilityConfig& c) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : c.cells) cells.push_back({{"r", cell.r}, {"h", cell.h}});
  return {{"corpus", corpus_to_json(c.corpus)},
          {"cells", cells},
          {"samples", c.samples},
          {"inverse_direction", c.inverse_direction},
          {"near_zero_radius", c.near_zero_radius},
          {"near_zero_samples", c.near_zero_samples},
          {"near_collision", c.near_collision},
          {"collision_index", c.collision_index},
          {"collision_fractions", c.collision_fractions},
          {"collision_step", c.collision_step},
          {"tol", c.tol},
          {"max_iter", c.max_iter}};
}

/// Accepts either a nested "corpus" object or corpus keys at top level.
inline StabilityConfig stability_config_from_json(const nlohmann::json& j) {
  StabilityConfig c;
  c.corpus = corpus_from_json(j);
  if (j.contains("corpus")) c.corpus = corpus_from_json(j.at("corpus"), c.corpus);
  if (j.contains("cells")) {
    c.cells.clear();
    for (const auto& cell : j.at("cells")) c.cells.push_back({cell.at("r").get<double>(), cell.at("h").get<double>()});
  }
  if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
  if (j.contains("inverse_direction")) c.inverse_direction = j.at("inverse_direction").get<bool>();
  if (j.contains("near_zero_radius")) c.near_zero_radius = j.at("near_zero_radius").get<double>();
  if (j.contains("near_zero_samples")) c.near_zero_samples = j.at("near_zero_samples").get<std::size_t>();
  if (j.contains("near_collision")) c.near_collision = j.at("near_collision").get<bool>();
  if (j.contains("collision_index")) c.collision_index = j.at("collision_index").get<std::size_t>();
  if (j.contains("collision_fractions")) c.collision_fractions = j.at("collision_fractions").get<std::vector<double>>();
  if (j.contains("collision_step")) c.collision_step = j.at("collision_step").get<double>();
  if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<std::size_t>();
  return c;
}

inline nlohmann::json omega_config_to_json(const OmegaImageConfig& c) {
  return {{"corpus", corpus_to_json(c.corpus)}, {"radii", c.radii},  {"samples", c.samples},
          {"reverse_samples", c.reverse_samples}, {"tol", c.tol}, {"max_iter", c.max_iter}};
}

inline OmegaImageConfig omega_config_from_json(const nlohmann::json& j) {
  OmegaImageConfig c;
  c.corpus = corpus_from_json(j);
  if (j.contains("corpus")) c.corpus = corpus_from_json(j.at("corpus"), c.corpus);
  if (j.contains("radii")) c.radii = j.at("radii").get<std::vector<double>>();
  if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
  if (j.contains("reverse_samples")) c.reverse_samples = j.at("reverse_samples").get<std::size_t>();
  if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<std::size_t>();
  return c;
}

inline std::string config_hash(const nlohmann::json& config) { return fnv1a_hex(config.dump()); }

inline nlohmann::json stats_to_json(const RatioStats& s) {
  return {{"count", s.count}, {"ratio_min", s.min}, {"ratio_max", s.max}, {"ratio_median", s.median}};
}

inline nlohmann::json stability_report_to_json(const StabilityReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"r", c.r},
                     {"h", c.h},
                     {"samples", c.samples},
                     {"valid", c.valid},
                     {"excluded", c.excluded},
                     {"ratio_min", c.all.min},
                     {"ratio_max", c.all.max},
                     {"ratio_median", c.all.median},
                     {"forward", stats_to_json(c.forward)},
                     {"inverse", stats_to_json(c.inverse)}});
  }
  return {{"flavor", flavor_name(r.flavor)},
          {"theta", r.theta},
          {"N", r.n},
          {"corpus_seed", r.corpus_seed},
          {"config_hash", r.config_hash},
          {"cells", cells},
          {"near_zero",
           {{"samples", r.near_zero.samples},
            {"valid", r.near_zero.valid},
            {"ratios", stats_to_json(r.near_zero.ratios)},
            {"max_factor_from_linearized", r.near_zero.max_factor}}},
          {"near_collision",
           {{"evaluated", r.collision.evaluated},
            {"index", r.collision.index},
            {"valid", r.collision.valid},
            {"ratios", stats_to_json(r.collision.ratios)},
            {"spread", r.collision.ratios.spread()},
            {"h_star", r.collision.h_star},
            {"h_star_min", r.collision.h_star_min}}}};
}

/// One row per pair: family,direction,r,h,index,dist_sigma,dist_data,ratio,linearized,valid,note
inline std::string pairs_to_csv(const std::vector<PairRecord>& pairs) {
  std::string out = "family,direction,r,h,index,dist_sigma,dist_data,ratio,linearized,valid,note\n";
  char buf[512];
  for (const auto& p : pairs) {
    std::string note = p.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%d,", p.family.c_str(),
                  p.direction.c_str(), p.r, p.h, p.index, p.dist_sigma, p.dist_data, p.ratio, p.linearized,
                  p.valid ? 1 : 0);
    out += buf;
    out += note;
    out += '\n';
  }
  return out;
}

inline nlohmann::json omega_report_to_json(const OmegaImageReport& r) {
  nlohmann::json radii = nlohmann::json::array();
  for (const auto& rr : r.radii) {
    radii.push_back({{"R", rr.radius},
                     {"samples", rr.samples},
                     {"passed", rr.passed},
                     {"r_of_R", rr.r_of_radius},
                     {"h_of_R", rr.h_of_radius},
                     {"reverse_R", rr.reverse_radius},
                     {"reverse_samples", rr.reverse_samples}});
  }
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"shell", rec.shell},
                    {"index", rec.index},
                    {"norm", rec.norm},
                    {"h_star", rec.h_star},
                    {"r_star", rec.r_star},
                    {"binding", rec.binding},
                    {"pass", rec.pass},
                    {"note", rec.note}});
  }
  return {{"flavor", flavor_name(r.flavor)},
          {"theta", r.theta},
          {"N", r.n},
          {"corpus_seed", r.corpus_seed},
          {"config_hash", r.config_hash},
          {"radii", radii},
          {"all_pass", r.all_pass},
          {"h_monotone", r.h_monotone},
          {"interlacing_violations", r.interlacing_violations},
          {"records", recs}};
}

}  // namespace slinv
