#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/error.hpp"

namespace ddsplit {

enum class AlphaKind {
  p_laplace,      // |z|^{p-2} z on gradients
  porous_medium,  // |z|^{p-2} z on values, p >= 2
  fast_diffusion, // |z|^{p-2} z on values, 1 < p < 2
  stefan,         // two-phase piecewise-linear map with a flat core on (-1, 1)
  adversarial,    // -z; violates monotonicity, audit fixture only
};

struct VectorFieldSpec {
  AlphaKind kind = AlphaKind::p_laplace;
  double p = 2.0;
  double a = 1.0;  // stefan slope below -1
  double b = 1.0;  // stefan slope above +1
  double eps_reg = 1e-8;
};

/// Default regularization widths.
inline constexpr double kDefaultPowerEps = 1e-8;
inline constexpr double kDefaultStefanEps = 1e-6;

/// Throws Error{invalid_spec} when the exponent or Stefan slopes are outside
/// the admissible range for the kind on a `dim`-dimensional domain.
void validate(const VectorFieldSpec& spec, int dim);

/// Exponent of the growth/coercivity bounds (2 for stefan and adversarial).
[[nodiscard]] double growth_exponent(const VectorFieldSpec& spec) noexcept;

/// alpha(z) written to `out` (same length as z).
void alpha(const VectorFieldSpec& spec, std::span<const double> z, std::span<double> out) noexcept;
[[nodiscard]] double alpha_scalar(const VectorFieldSpec& spec, double z) noexcept;

/// Jacobian d alpha / dz, row-major k x k into `out`.
void alpha_jacobian(const VectorFieldSpec& spec, std::span<const double> z,
                    std::span<double> out) noexcept;
[[nodiscard]] double alpha_derivative(const VectorFieldSpec& spec, double z) noexcept;

/// Scalar c >= 0 with alpha(z) ~ c z along z (secant slope), used by
/// lagged-coefficient iterations.
[[nodiscard]] double alpha_secant(const VectorFieldSpec& spec, std::span<const double> z) noexcept;

struct PropertyReport {
  std::size_t samples = 0;
  int k = 1;
  double exponent = 2.0;
  std::size_t monotonicity_violations = 0;
  double worst_monotonicity = 0.0;  // most negative (alpha(z)-alpha(w)).(z-w)
  double c1 = 0.0;  // growth |alpha| <= c1 |z|^{p-1} + c2
  double c2 = 0.0;
  std::size_t growth_violations = 0;
  double c3 = 0.0;  // coercivity alpha.z >= c3 |z|^p - c4
  double c4 = 0.0;
  bool coercive = false;
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

/// Samples pairs uniformly in the ball of radius `domain_radius` in R^k and
/// audits monotonicity (tolerance 1e-12), growth and coercivity. Growth
/// constants are fitted on |z| >= 1, coercivity on |z| >= radius / 2.
/// k defaults to 2 for p_laplace and 1 otherwise.
[[nodiscard]] PropertyReport check_assumption3(const VectorFieldSpec& spec,
                                               std::size_t sample_count, double domain_radius,
                                               std::uint64_t seed = 1, int k = 0);

[[nodiscard]] std::string to_string(AlphaKind kind);
/// Throws Error{invalid_spec} on unknown names.
[[nodiscard]] AlphaKind alpha_kind_from_string(const std::string& name);

}  // namespace ddsplit
