#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slinv {

enum class errc {
  invalid_potential,
  invalid_argument,
  non_positive_lambda,
  integration_overflow,
  bracket_failure,
  interlacing_violation,
  shift_too_negative,
  ill_conditioned_fit,
  degenerate_denominator,
  t_out_of_range,
  g_non_positive,
  no_convergence,
  omega_violation,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::invalid_potential: return "InvalidPotential";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::non_positive_lambda: return "NonPositiveLambda";
    case errc::integration_overflow: return "IntegrationOverflow";
    case errc::bracket_failure: return "BracketFailure";
    case errc::interlacing_violation: return "InterlacingViolation";
    case errc::shift_too_negative: return "ShiftTooNegative";
    case errc::ill_conditioned_fit: return "IllConditionedFit";
    case errc::degenerate_denominator: return "DegenerateDenominator";
    case errc::t_out_of_range: return "TOutOfRange";
    case errc::g_non_positive: return "GNonPositive";
    case errc::no_convergence: return "NoConvergence";
    case errc::omega_violation: return "OmegaViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library. `index` carries the eigenvalue index
/// for BracketFailure, `iterations`/`residual` the state at NoConvergence.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

  std::size_t index = 0;
  std::size_t iterations = 0;
  double residual = 0.0;

 private:
  errc code_;
};

}  // namespace slinv
