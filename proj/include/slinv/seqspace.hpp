#pragma once

// Extended weighted sequence spaces
//   l^theta_B = l^theta_2 (+) span{e_1..e_2m},  m = floor(theta/2 + 3/4),
//   l^theta_D = l^theta_2 (+) span{e^_1..e^_m}, m - 1/2 <= theta < m + 1/2,
// with (x + sum c e, y + sum d e) = (x, y)_theta + sum c d.
// Sequences are stored 0-based: entry [p-1] holds position p.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "slinv/error.hpp"
#include "slinv/spectra.hpp"

namespace slinv {

struct ExtSeq {
  std::vector<double> tail;
  std::vector<double> special;
  double theta = 1.0;
  Flavor flavor = Flavor::borg;
  std::size_t n = 0;  // truncation order; tail has 2n entries
};

inline int m_of_theta(double theta, Flavor flavor) {
  if (!(theta >= 0.0)) throw error(errc::invalid_argument, "theta must be >= 0");
  if (flavor == Flavor::borg) return static_cast<int>(std::floor(theta / 2.0 + 0.75));
  return static_cast<int>(std::floor(theta + 0.5));
}

/// Number of special coefficients: 2m (Borg) or m (Dirichlet).
inline std::size_t special_count(double theta, Flavor flavor) {
  const int m = m_of_theta(theta, flavor);
  return static_cast<std::size_t>(flavor == Flavor::borg ? 2 * m : m);
}

/// Value of the j-th special sequence at position p (both 1-based).
/// Borg: e_{2s-1} = k^{-(2s-1)}, e_{2s} = (-1)^k k^{-(2s-1)}.
/// Dirichlet: e^_{2s-1} = (2k)^{-(2s-1)} at positions 2k, e^_{2s} = (2k)^{-2s}
/// at positions 2k-1.
inline double special_value(Flavor flavor, std::size_t j, std::size_t p) {
  const std::size_t s = (j + 1) / 2;
  const bool odd_j = (j % 2) == 1;
  if (flavor == Flavor::borg) {
    const double v = std::pow(static_cast<double>(p), -static_cast<double>(2 * s - 1));
    return (odd_j || p % 2 == 0) ? v : -v;
  }
  if (odd_j) {
    if (p % 2 == 1) return 0.0;
    return std::pow(static_cast<double>(p), -static_cast<double>(2 * s - 1));
  }
  if (p % 2 == 0) return 0.0;
  return std::pow(static_cast<double>(p + 1), -static_cast<double>(2 * s));
}

inline std::vector<double> special_sequence(Flavor flavor, std::size_t j, std::size_t length) {
  if (j < 1) throw error(errc::invalid_argument, "special sequence index starts at 1");
  std::vector<double> out(length);
  for (std::size_t p = 1; p <= length; ++p) out[p - 1] = special_value(flavor, j, p);
  return out;
}

/// sqrt(sum_p x_p^2 p^{2 theta}).
inline double weighted_norm(const std::vector<double>& x, double theta) {
  double acc = 0.0;
  for (std::size_t p = 1; p <= x.size(); ++p) {
    const double w = std::pow(static_cast<double>(p), theta);
    acc += x[p - 1] * x[p - 1] * w * w;
  }
  return std::sqrt(acc);
}

inline double ext_norm(const ExtSeq& x) {
  double acc = 0.0;
  for (std::size_t p = 1; p <= x.tail.size(); ++p) {
    const double w = std::pow(static_cast<double>(p), x.theta);
    acc += x.tail[p - 1] * x.tail[p - 1] * w * w;
  }
  for (double c : x.special) acc += c * c;
  return std::sqrt(acc);
}

/// Fit window: positions p <= decompose_head are excluded from the fit.
inline constexpr std::size_t decompose_head = 8;
/// Extra higher-order sequences fitted alongside the special ones and then
/// returned to the tail; they absorb the next asymptotic order.
inline constexpr std::size_t decompose_nuisance = 2;
inline constexpr double max_fit_condition = 1e12;

/// Fits the first `count` special sequences (plus `nuisance` higher ones that
/// are returned to the tail) by weighted least squares over positions
/// p > decompose_head with weight p^{2 theta}.
inline ExtSeq decompose_fit(const std::vector<double>& raw, double theta, Flavor flavor, std::size_t count,
                            std::size_t nuisance = decompose_nuisance) {
  ExtSeq out;
  out.theta = theta;
  out.flavor = flavor;
  out.n = raw.size() / 2;
  out.tail = raw;
  if (count == 0) return out;

  const std::size_t nf = count + nuisance;
  if (raw.size() < decompose_head + nf + 1) {
    throw error(errc::ill_conditioned_fit, "sequence too short for the special-sequence fit");
  }
  const std::size_t rows = raw.size() - decompose_head;
  Eigen::MatrixXd a(rows, nf);
  Eigen::VectorXd b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t p = decompose_head + 1 + r;
    const double w = std::pow(static_cast<double>(p), theta);
    for (std::size_t j = 0; j < nf; ++j) a(r, j) = w * special_value(flavor, j + 1, p);
    b(r) = w * raw[p - 1];
  }
  // Column scaling makes the conditioning test independent of the units of
  // each sequence.
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (std::size_t j = 0; j < nf; ++j) {
    if (scale(j) == 0.0) throw error(errc::ill_conditioned_fit, "empty special column");
    a.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond * cond <= max_fit_condition)) {
    throw error(errc::ill_conditioned_fit, "weighted Gram condition number " + std::to_string(cond * cond));
  }
  Eigen::VectorXd c = svd.solve(b);
  out.special.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    out.special[j] = c(j) / scale(j);
    for (std::size_t p = 1; p <= raw.size(); ++p) {
      out.tail[p - 1] -= out.special[j] * special_value(flavor, j + 1, p);
    }
  }
  return out;
}

/// Splits a truncated sequence into tail + the special part of l^theta.
inline ExtSeq decompose(const std::vector<double>& raw, double theta, Flavor flavor) {
  return decompose_fit(raw, theta, flavor, special_count(theta, flavor));
}

/// tail + sum_j special_j * e_j, truncated to the tail length.
inline std::vector<double> recombine(const ExtSeq& x) {
  std::vector<double> raw = x.tail;
  for (std::size_t j = 0; j < x.special.size(); ++j) {
    for (std::size_t p = 1; p <= raw.size(); ++p) {
      raw[p - 1] += x.special[j] * special_value(x.flavor, j + 1, p);
    }
  }
  return raw;
}

/// The l^theta norm of a raw truncated sequence after splitting.
inline double data_norm(const std::vector<double>& raw, double theta, Flavor flavor) {
  return ext_norm(decompose(raw, theta, flavor));
}

struct OmegaDiagnostics {
  bool member = false;
  double h_star = 0.0;         // largest margin h the data supports
  double norm = 0.0;           // ||s||_theta
  std::size_t binding_index = 0;  // 1-based index of the constraint fixing h_star
  std::string binding_kind;    // "gap", "alpha", "none"
  bool lower_ok = true;        // s_1 >= 0 (Borg) / s_2 >= sqrt(1/2) - 1 (Dirichlet)
  std::string reason;          // empty when member
};

/// Membership of regularized data in Omega^theta(r, h):
/// Rounding allowance on the lower spectral bound; the zero potential sits on it.
inline constexpr double lower_bound_slack = 1e-12;

/// Borg: s_1 >= 0, s_k - s_{k+1} <= 1/2 - h, ||s|| <= r.
/// Dirichlet: s_2 >= sqrt(1/2) - 1, s_{2k} - s_{2k+2} <= 1 - h,
/// s_{2k-1} >= -pi/2 + h, ||s|| <= r.
inline OmegaDiagnostics omega_membership(const RegularizedData& data, double r, double h, double theta) {
  if (!(r > 0.0)) throw error(errc::invalid_argument, "r must be positive");
  const double h_max = data.flavor == Flavor::borg ? 0.5 : 1.0;
  if (!(h > 0.0 && h < h_max)) throw error(errc::invalid_argument, "h out of range");
  const auto& s = data.s;
  OmegaDiagnostics d;
  d.h_star = std::numeric_limits<double>::infinity();
  d.binding_kind = "none";
  if (data.flavor == Flavor::borg) {
    d.lower_ok = !s.empty() && s[0] >= std::sqrt(eta_borg) - 0.5 - lower_bound_slack;
    for (std::size_t k = 1; k < s.size(); ++k) {
      const double margin = 0.5 - (s[k - 1] - s[k]);
      if (margin < d.h_star) {
        d.h_star = margin;
        d.binding_index = k;
        d.binding_kind = "gap";
      }
    }
  } else {
    d.lower_ok = s.size() >= 2 && s[1] >= std::sqrt(eta_dirichlet) - 1.0 - lower_bound_slack;
    for (std::size_t k = 1; 2 * k <= s.size(); ++k) {
      const double margin = s[2 * k - 2] + pi / 2.0;
      if (margin < d.h_star) {
        d.h_star = margin;
        d.binding_index = k;
        d.binding_kind = "alpha";
      }
      if (2 * k + 2 <= s.size()) {
        const double gap = 1.0 - (s[2 * k - 1] - s[2 * k + 1]);
        if (gap < d.h_star) {
          d.h_star = gap;
          d.binding_index = k;
          d.binding_kind = "gap";
        }
      }
    }
  }
  d.norm = data_norm(s, theta, data.flavor);
  if (!d.lower_ok) d.reason = "lower spectral bound";
  else if (d.h_star < h) d.reason = "margin";
  else if (d.norm > r) d.reason = "norm";
  d.member = d.reason.empty();
  return d;
}

}  // namespace slinv
