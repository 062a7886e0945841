#pragma once

#include <array>
#include <span>

#include "ddsplit/grid.hpp"

namespace ddsplit {

/// Self-similar compactly supported solution of u_t = lap(u^m), m > 1:
///   U(x, t) = t^{-a} max(C - k |x|^2 t^{-2b}, 0)^{1/(m-1)}
/// with a = d / (d (m - 1) + 2), b = a / d, k = a (m - 1) / (2 d m).
/// It solves the porous medium family with alpha(z) = |z|^{p-2} z, m = p - 1.
struct BarenblattParams {
  int d = 1;
  double m = 2.0;
  double C = 1.0;
  double t0 = 0.01;
};

struct BarenblattExponents {
  double a;
  double b;
  double k;
};

/// Throws Error{invalid_params} unless d in {1, 2, 3}, m > 1, C > 0, t0 > 0.
void validate(const BarenblattParams& params);

[[nodiscard]] BarenblattExponents barenblatt_exponents(int d, double m);

/// Evaluates U at offset x from the centre. Throws Error{invalid_params}
/// for t < t0.
[[nodiscard]] double barenblatt(const BarenblattParams& params, std::span<const double> x, double t);

/// Free-boundary radius sqrt(C / k) t^b.
[[nodiscard]] double barenblatt_support_radius(const BarenblattParams& params, double t);

/// Integral of U over R^d (independent of t).
[[nodiscard]] double barenblatt_mass(const BarenblattParams& params);

/// The C that gives total mass `mass`.
[[nodiscard]] double barenblatt_constant_for_mass(int d, double m, double mass);

/// Samples U(. - center, t) on the grid nodes.
[[nodiscard]] Field barenblatt_field(const BarenblattParams& params, const Grid& grid, double t,
                                     std::array<double, 2> center = {0.0, 0.0});

}  // namespace ddsplit
