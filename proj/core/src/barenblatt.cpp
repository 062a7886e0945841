#include "ddsplit/barenblatt.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "ddsplit/error.hpp"

namespace ddsplit {

namespace {

// Surface measure of the unit sphere in R^d times the radial integral
// int_0^1 (1 - s^2)^q s^{d-1} ds = B(d/2, q + 1) / 2.
double profile_integral(int d, double q) {
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  const double beta = std::tgamma(0.5 * d) * std::tgamma(q + 1.0) / std::tgamma(0.5 * d + q + 1.0);
  return sphere * 0.5 * beta;
}

}  // namespace

void validate(const BarenblattParams& p) {
  if (p.d < 1 || p.d > 3 || !(p.m > 1.0) || !(p.C > 0.0) || !(p.t0 > 0.0)) {
    throw Error(ErrorCode::invalid_params,
                fmt::format("Barenblatt needs d in 1..3, m > 1, C > 0, t0 > 0 (got d={}, m={}, "
                            "C={}, t0={})",
                            p.d, p.m, p.C, p.t0));
  }
}

BarenblattExponents barenblatt_exponents(int d, double m) {
  const double a = d / (d * (m - 1.0) + 2.0);
  return {a, a / d, a * (m - 1.0) / (2.0 * d * m)};
}

double barenblatt(const BarenblattParams& params, std::span<const double> x, double t) {
  validate(params);
  if (t < params.t0 * (1.0 - 1e-12)) {
    throw Error(ErrorCode::invalid_params,
                fmt::format("Barenblatt evaluated at t = {} before t0 = {}", t, params.t0));
  }
  const auto e = barenblatt_exponents(params.d, params.m);
  double r2 = 0.0;
  for (int i = 0; i < params.d; ++i) r2 += x[i] * x[i];
  const double core = params.C - e.k * r2 * std::pow(t, -2.0 * e.b);
  if (core <= 0.0) return 0.0;
  return std::pow(t, -e.a) * std::pow(core, 1.0 / (params.m - 1.0));
}

double barenblatt_support_radius(const BarenblattParams& params, double t) {
  validate(params);
  const auto e = barenblatt_exponents(params.d, params.m);
  return std::sqrt(params.C / e.k) * std::pow(t, e.b);
}

double barenblatt_mass(const BarenblattParams& params) {
  validate(params);
  const auto e = barenblatt_exponents(params.d, params.m);
  const double q = 1.0 / (params.m - 1.0);
  return std::pow(params.C, q + 0.5 * params.d) * std::pow(e.k, -0.5 * params.d) *
         profile_integral(params.d, q);
}

double barenblatt_constant_for_mass(int d, double m, double mass) {
  if (!(mass > 0.0)) throw Error(ErrorCode::invalid_params, "Barenblatt mass must be positive");
  BarenblattParams unit{d, m, 1.0, 1.0};
  const double q = 1.0 / (m - 1.0);
  return std::pow(mass / barenblatt_mass(unit), 1.0 / (q + 0.5 * d));
}

Field barenblatt_field(const BarenblattParams& params, const Grid& grid, double t,
                       std::array<double, 2> center) {
  if (params.d != grid.dim()) {
    throw Error(ErrorCode::invalid_params, "Barenblatt dimension differs from the grid");
  }
  Field u(grid);
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    auto x = grid.node_coords(node);
    for (int a = 0; a < grid.dim(); ++a) x[a] -= center[a];
    u[node] = barenblatt(params, x, t);
  }
  return u;
}

}  // namespace ddsplit
