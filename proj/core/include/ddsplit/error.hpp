#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddsplit {

enum class ErrorCode {
  invalid_extent,
  too_coarse,
  grid_mismatch,
  singular_operator,
  infeasible_layout,
  uncovered_node,
  invalid_spec,
  non_convergence,
  invalid_step,
  step_too_large,
  invalid_params,
  reference_unavailable,
  io_error,
  config_error,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for everything thrown by the library. The code lets
/// callers branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ddsplit
