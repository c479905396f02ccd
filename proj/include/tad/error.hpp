#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tad {

enum class Errc {
  // input validation
  invalid_argument,
  unsupported_regime,
  degenerate_frame,
  zero_diameter,
  undefined_angle,
  degenerate_polynomial,
  undefined_direction,
  // numerical failures
  rooting_failure,
  singular_configuration,
  singular_arc,
  infeasible_terminal,
  non_convergence,
};

constexpr std::string_view to_string(Errc c) {
  switch (c) {
  case Errc::invalid_argument: return "invalid-argument";
  case Errc::unsupported_regime: return "unsupported-regime";
  case Errc::degenerate_frame: return "degenerate-frame";
  case Errc::zero_diameter: return "zero-diameter";
  case Errc::undefined_angle: return "undefined-angle";
  case Errc::degenerate_polynomial: return "degenerate-polynomial";
  case Errc::undefined_direction: return "undefined-direction";
  case Errc::rooting_failure: return "rooting-failure";
  case Errc::singular_configuration: return "singular-configuration";
  case Errc::singular_arc: return "singular-arc";
  case Errc::infeasible_terminal: return "infeasible-terminal";
  case Errc::non_convergence: return "non-convergence";
  }
  return "unknown";
}

/// Validation errors describe bad inputs; everything else is a numerical failure.
constexpr bool is_validation(Errc c) {
  switch (c) {
  case Errc::invalid_argument:
  case Errc::unsupported_regime:
  case Errc::degenerate_frame:
  case Errc::zero_diameter:
  case Errc::undefined_angle:
  case Errc::degenerate_polynomial:
  case Errc::undefined_direction:
    return true;
  default:
    return false;
  }
}

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string &what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  bool is_validation() const noexcept { return tad::is_validation(code_); }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string &what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace tad
