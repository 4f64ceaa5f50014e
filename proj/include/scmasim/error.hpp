#pragma once

#include <stdexcept>
#include <string>

namespace scmasim {

enum class Errc {
  zero_energy,
  unsupported_size,
  unknown_name,
  parse_error,
  invariant_violation,
  not_unitary,
  dimension_mismatch,
  invalid_n0,
  invalid_config,
  non_finite,
  too_large,
  length_mismatch,
  config_error,
  grid_mismatch,
  degenerate_pair,
  io_error,
};

/// Library-wide error type; code() identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace scmasim
