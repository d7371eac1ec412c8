#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shocklim {

/// Failure categories raised by the toolkit. Every thrown shocklim::Error
/// carries exactly one of these so callers (and tests) can branch on the
/// kind instead of parsing messages.
enum class Errc {
  equal_states,
  quadrature_nonconvergence,
  convexity_violation,
  non_admissible_shock,
  under_resolved_layer,
  instability,
  degenerate_state,
  out_of_domain,
  domain_too_small,
  invalid_parameter,
  resolution_gate,
  boundary_contamination,
  nonpositive_value,
  config,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace shocklim
