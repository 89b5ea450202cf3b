#pragma once

// ||sigma||_theta := ||T sigma||_{l^theta} computed from the first 2N
// coefficients of T sigma after splitting off the special sequences.

#include <cstddef>

#include "slinv/linearized.hpp"
#include "slinv/potential.hpp"
#include "slinv/seqspace.hpp"

namespace slinv {

inline constexpr std::size_t default_norm_order = 64;

inline double sobolev_norm(const Potential& sigma, double theta, Flavor flavor = Flavor::borg,
                           std::size_t n = default_norm_order) {
  return ext_norm(decompose(t_forward(sigma, flavor, n), theta, flavor));
}

inline double sobolev_distance(const Potential& a, const Potential& b, double theta,
                               Flavor flavor = Flavor::borg, std::size_t n = default_norm_order) {
  return sobolev_norm(a - b, theta, flavor, n);
}

}  // namespace slinv
