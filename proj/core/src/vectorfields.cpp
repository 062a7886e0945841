#include "ddsplit/vectorfields.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ddsplit/error.hpp"

namespace ddsplit {

namespace {

bool is_power(AlphaKind kind) {
  return kind == AlphaKind::p_laplace || kind == AlphaKind::porous_medium ||
         kind == AlphaKind::fast_diffusion;
}

double squared_norm(std::span<const double> z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return s;
}

// |z|^2 + eps^2, kept away from zero when the exponent is negative.
double regularized_sq(const VectorFieldSpec& spec, std::span<const double> z) {
  double s = squared_norm(z) + spec.eps_reg * spec.eps_reg;
  if (spec.p < 2.0) s = std::max(s, 1e-300);
  return s;
}

double stefan_value(const VectorFieldSpec& spec, double z) {
  const double e = spec.eps_reg;
  const double h = 0.5 * e;
  if (z >= 1.0 + h) return spec.b * (z - 1.0);
  if (z <= -1.0 - h) return spec.a * (z + 1.0);
  if (e > 0.0 && z > 1.0 - h) {
    const double t = z - 1.0 + h;
    return spec.b * t * t / (2.0 * e);
  }
  if (e > 0.0 && z < -1.0 + h) {
    const double t = z + 1.0 - h;
    return -spec.a * t * t / (2.0 * e);
  }
  return 0.0;
}

double stefan_slope(const VectorFieldSpec& spec, double z) {
  const double e = spec.eps_reg;
  const double h = 0.5 * e;
  if (z >= 1.0 + h) return spec.b;
  if (z <= -1.0 - h) return spec.a;
  if (e > 0.0 && z > 1.0 - h) return spec.b * (z - 1.0 + h) / e;
  if (e > 0.0 && z < -1.0 + h) return -spec.a * (z + 1.0 - h) / e;
  return 0.0;
}

}  // namespace

void validate(const VectorFieldSpec& spec, int dim) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::invalid_spec, why); };
  if (!(spec.eps_reg >= 0.0) || !std::isfinite(spec.eps_reg)) fail("eps_reg must be >= 0");
  switch (spec.kind) {
    case AlphaKind::p_laplace:
      if (!(spec.p >= 2.0)) fail(fmt::format("p-Laplace needs p >= 2, got {}", spec.p));
      break;
    case AlphaKind::porous_medium:
      if (!(spec.p >= 2.0)) fail(fmt::format("porous medium needs p >= 2, got {}", spec.p));
      break;
    case AlphaKind::fast_diffusion:
      if (!(spec.p > 1.0 && spec.p < 2.0)) {
        fail(fmt::format("fast diffusion needs 1 < p < 2, got {}", spec.p));
      }
      break;
    case AlphaKind::stefan:
      if (!(spec.a > 0.0) || !(spec.b > 0.0)) fail("Stefan slopes a and b must be positive");
      break;
    case AlphaKind::adversarial:
      fail("the adversarial map is an audit fixture and cannot drive a problem");
  }
  if ((spec.kind == AlphaKind::porous_medium || spec.kind == AlphaKind::fast_diffusion) &&
      dim > 2) {
    const double pmin = 2.0 * dim / (dim + 2.0);
    if (spec.p < pmin) fail(fmt::format("d = {} needs p >= {}", dim, pmin));
  }
}

double growth_exponent(const VectorFieldSpec& spec) noexcept {
  return is_power(spec.kind) ? spec.p : 2.0;
}

void alpha(const VectorFieldSpec& spec, std::span<const double> z, std::span<double> out) noexcept {
  switch (spec.kind) {
    case AlphaKind::p_laplace:
    case AlphaKind::porous_medium:
    case AlphaKind::fast_diffusion: {
      const double s = squared_norm(z) + spec.eps_reg * spec.eps_reg;
      if (s == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
      }
      const double rho = spec.p == 2.0 ? 1.0 : std::pow(s, 0.5 * (spec.p - 2.0));
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = rho * z[i];
      return;
    }
    case AlphaKind::stefan:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = stefan_value(spec, z[i]);
      return;
    case AlphaKind::adversarial:
      for (std::size_t i = 0; i < z.size(); ++i) out[i] = -z[i];
      return;
  }
}

double alpha_scalar(const VectorFieldSpec& spec, double z) noexcept {
  double out = 0.0;
  alpha(spec, std::span<const double>(&z, 1), std::span<double>(&out, 1));
  return out;
}

void alpha_jacobian(const VectorFieldSpec& spec, std::span<const double> z,
                    std::span<double> out) noexcept {
  const std::size_t k = z.size();
  std::fill(out.begin(), out.end(), 0.0);
  switch (spec.kind) {
    case AlphaKind::p_laplace:
    case AlphaKind::porous_medium:
    case AlphaKind::fast_diffusion: {
      if (spec.p == 2.0) {
        for (std::size_t i = 0; i < k; ++i) out[i * k + i] = 1.0;
        return;
      }
      const double s = regularized_sq(spec, z);
      if (s == 0.0) return;  // p > 2 at the degenerate point
      const double rho = std::pow(s, 0.5 * (spec.p - 2.0));
      const double outer = (spec.p - 2.0) * rho / s;
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) out[i * k + j] = outer * z[i] * z[j];
        out[i * k + i] += rho;
      }
      return;
    }
    case AlphaKind::stefan:
      for (std::size_t i = 0; i < k; ++i) out[i * k + i] = stefan_slope(spec, z[i]);
      return;
    case AlphaKind::adversarial:
      for (std::size_t i = 0; i < k; ++i) out[i * k + i] = -1.0;
      return;
  }
}

double alpha_derivative(const VectorFieldSpec& spec, double z) noexcept {
  double out = 0.0;
  alpha_jacobian(spec, std::span<const double>(&z, 1), std::span<double>(&out, 1));
  return out;
}

double alpha_secant(const VectorFieldSpec& spec, std::span<const double> z) noexcept {
  if (is_power(spec.kind)) {
    if (spec.p == 2.0) return 1.0;
    const double s = regularized_sq(spec, z);
    return s == 0.0 ? 0.0 : std::pow(s, 0.5 * (spec.p - 2.0));
  }
  const double zz = squared_norm(z);
  if (zz == 0.0) {
    return z.size() == 1 ? alpha_derivative(spec, 0.0) : 0.0;
  }
  std::vector<double> a(z.size());
  alpha(spec, z, a);
  double dot = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) dot += a[i] * z[i];
  return std::max(0.0, dot / zz);
}

PropertyReport check_assumption3(const VectorFieldSpec& spec, std::size_t sample_count,
                                 double domain_radius, std::uint64_t seed, int k) {
  if (k <= 0) k = spec.kind == AlphaKind::p_laplace ? 2 : 1;
  const auto uk = static_cast<std::size_t>(k);
  PropertyReport rep;
  rep.samples = sample_count;
  rep.k = k;
  rep.exponent = growth_exponent(spec);
  const double p = rep.exponent;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&](std::vector<double>& z) {
    if (k == 1) {
      z[0] = domain_radius * (2.0 * unit(rng) - 1.0);
      return;
    }
    // Uniform in the k-ball: Gaussian direction, radius ~ U^{1/k}.
    std::normal_distribution<double> gauss;
    double nrm = 0.0;
    for (auto& v : z) {
      v = gauss(rng);
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    const double r = domain_radius * std::pow(unit(rng), 1.0 / k);
    for (auto& v : z) v *= nrm > 0.0 ? r / nrm : 0.0;
  };

  std::vector<std::vector<double>> zs(sample_count, std::vector<double>(uk));
  std::vector<std::vector<double>> as(sample_count, std::vector<double>(uk));
  std::vector<double> w(uk);
  std::vector<double> aw(uk);
  rep.worst_monotonicity = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sample_count; ++s) {
    sample(zs[s]);
    sample(w);
    alpha(spec, zs[s], as[s]);
    alpha(spec, w, aw);
    double prod = 0.0;
    for (std::size_t i = 0; i < uk; ++i) prod += (as[s][i] - aw[i]) * (zs[s][i] - w[i]);
    rep.worst_monotonicity = std::min(rep.worst_monotonicity, prod);
    if (prod < -1e-12) ++rep.monotonicity_violations;
  }
  if (rep.monotonicity_violations > 0) {
    rep.failures.push_back(fmt::format("monotonicity violated in {} of {} pairs (worst {:.3e})",
                                       rep.monotonicity_violations, sample_count,
                                       rep.worst_monotonicity));
  }

  auto norm = [](const std::vector<double>& v) { return std::sqrt(squared_norm(v)); };
  auto dot = [uk](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < uk; ++i) s += a[i] * b[i];
    return s;
  };

  const double growth_floor = domain_radius >= 1.0 ? 1.0 : 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double r = norm(zs[s]);
    if (r >= growth_floor && r > 0.0) rep.c1 = std::max(rep.c1, norm(as[s]) / std::pow(r, p - 1.0));
  }
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double r = norm(zs[s]);
    rep.c2 = std::max(rep.c2, norm(as[s]) - rep.c1 * std::pow(r, p - 1.0));
  }
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double r = norm(zs[s]);
    const double bound = rep.c1 * std::pow(r, p - 1.0) + rep.c2;
    if (norm(as[s]) > bound * (1.0 + 1e-12) + 1e-300) ++rep.growth_violations;
  }
  if (!(rep.c1 > 0.0) || !std::isfinite(rep.c1) || rep.growth_violations > 0) {
    rep.failures.push_back(fmt::format("growth bound not established (c1 = {:.3e})", rep.c1));
  }

  rep.c3 = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double r = norm(zs[s]);
    if (r >= 0.5 * domain_radius && r > 0.0) {
      rep.c3 = std::min(rep.c3, dot(as[s], zs[s]) / std::pow(r, p));
    }
  }
  if (!std::isfinite(rep.c3)) rep.c3 = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    const double r = norm(zs[s]);
    rep.c4 = std::max(rep.c4, rep.c3 * std::pow(r, p) - dot(as[s], zs[s]));
  }
  rep.coercive = rep.c3 > 0.0;
  if (!rep.coercive) {
    rep.failures.push_back(fmt::format("coercivity constant is not positive (c3 = {:.3e})", rep.c3));
  }
  return rep;
}

std::string to_string(AlphaKind kind) {
  switch (kind) {
    case AlphaKind::p_laplace: return "p_laplace";
    case AlphaKind::porous_medium: return "porous_medium";
    case AlphaKind::fast_diffusion: return "fast_diffusion";
    case AlphaKind::stefan: return "stefan";
    case AlphaKind::adversarial: return "adversarial";
  }
  return "unknown";
}

AlphaKind alpha_kind_from_string(const std::string& name) {
  for (auto kind : {AlphaKind::p_laplace, AlphaKind::porous_medium, AlphaKind::fast_diffusion,
                    AlphaKind::stefan, AlphaKind::adversarial}) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::invalid_spec, fmt::format("unknown alpha kind '{}'", name));
}

}  // namespace ddsplit
