#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "ddsplit/vectorfields.hpp"

using namespace ddsplit;

namespace {

VectorFieldSpec spec(AlphaKind kind, double p, double eps = 0.0) {
  VectorFieldSpec s;
  s.kind = kind;
  s.p = p;
  s.eps_reg = eps;
  return s;
}

std::vector<VectorFieldSpec> shipped() {
  VectorFieldSpec st = spec(AlphaKind::stefan, 2.0, kDefaultStefanEps);
  st.a = 0.5;
  st.b = 2.0;
  return {spec(AlphaKind::p_laplace, 3.0, 1e-8), spec(AlphaKind::porous_medium, 3.0, 1e-8),
          spec(AlphaKind::fast_diffusion, 1.5, 1e-8), st};
}

}  // namespace

TEST(Alpha, ZeroMapsToZero) {
  for (auto kind : {AlphaKind::p_laplace, AlphaKind::porous_medium, AlphaKind::fast_diffusion,
                    AlphaKind::stefan}) {
    const auto s = spec(kind, kind == AlphaKind::fast_diffusion ? 1.5 : 3.0);
    const std::array<double, 2> z{0.0, 0.0};
    std::array<double, 2> out{1.0, 1.0};
    const std::size_t k = kind == AlphaKind::p_laplace ? 2 : 1;
    alpha(s, std::span<const double>(z.data(), k), std::span<double>(out.data(), k));
    for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(out[i], 0.0);
  }
}

TEST(Alpha, PLaplaceCubic) {
  const auto s = spec(AlphaKind::p_laplace, 3.0);
  const std::array<double, 2> z{2.0, 0.0};
  std::array<double, 2> out{};
  alpha(s, z, out);
  EXPECT_DOUBLE_EQ(out[0], 4.0);
  EXPECT_DOUBLE_EQ(out[1], 0.0);
}

TEST(Alpha, StefanPlateauAndSlopes) {
  auto s = spec(AlphaKind::stefan, 2.0, 0.0);
  EXPECT_EQ(alpha_scalar(s, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(alpha_scalar(s, 2.0), 1.0);
  EXPECT_DOUBLE_EQ(alpha_scalar(s, -3.0), -2.0);
  s.a = 3.0;
  s.b = 0.5;
  EXPECT_DOUBLE_EQ(alpha_scalar(s, -2.0), -3.0);
  EXPECT_DOUBLE_EQ(alpha_scalar(s, 3.0), 1.0);
}

TEST(Alpha, StefanBlendingIsContinuouslyDifferentiable) {
  const auto s = spec(AlphaKind::stefan, 2.0, 1e-2);
  for (double c : {-1.0, 1.0}) {
    for (double side : {-0.005, 0.005}) {
      const double z = c + side;
      const double lo = alpha_scalar(s, z - 1e-12);
      const double hi = alpha_scalar(s, z + 1e-12);
      EXPECT_NEAR(lo, hi, 1e-10);
      EXPECT_NEAR(alpha_derivative(s, z - 1e-12), alpha_derivative(s, z + 1e-12), 1e-8);
    }
  }
}

TEST(AlphaJacobian, LinearCaseIsIdentity) {
  const auto s = spec(AlphaKind::p_laplace, 2.0);
  for (const auto& z : {std::array<double, 2>{0.3, -1.2}, std::array<double, 2>{0.0, 0.0}}) {
    std::array<double, 4> j{};
    alpha_jacobian(s, z, j);
    EXPECT_DOUBLE_EQ(j[0], 1.0);
    EXPECT_DOUBLE_EQ(j[1], 0.0);
    EXPECT_DOUBLE_EQ(j[2], 0.0);
    EXPECT_DOUBLE_EQ(j[3], 1.0);
  }
}

TEST(AlphaJacobian, QuarticAtUnitVector) {
  const auto s = spec(AlphaKind::p_laplace, 4.0);
  const std::array<double, 2> z{1.0, 0.0};
  std::array<double, 4> j{};
  alpha_jacobian(s, z, j);
  EXPECT_DOUBLE_EQ(j[0], 3.0);
  EXPECT_DOUBLE_EQ(j[1], 0.0);
  EXPECT_DOUBLE_EQ(j[2], 0.0);
  EXPECT_DOUBLE_EQ(j[3], 1.0);
}

TEST(AlphaJacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (const auto& s : shipped()) {
    const std::size_t k = s.kind == AlphaKind::p_laplace ? 2 : 1;
    for (int trial = 0; trial < 200; ++trial) {
      std::array<double, 2> z{dist(rng), dist(rng)};
      if (s.kind == AlphaKind::stefan && std::abs(std::abs(z[0]) - 1.0) < 1e-3) continue;
      if (s.kind == AlphaKind::fast_diffusion && std::abs(z[0]) < 0.05) continue;
      std::array<double, 4> jac{};
      alpha_jacobian(s, std::span<const double>(z.data(), k), std::span<double>(jac.data(), k * k));
      std::array<double, 2> base{};
      alpha(s, std::span<const double>(z.data(), k), std::span<double>(base.data(), k));
      for (std::size_t c = 0; c < k; ++c) {
        const double eps = 1e-6;
        auto zp = z;
        auto zm = z;
        zp[c] += eps;
        zm[c] -= eps;
        std::array<double, 2> ap{};
        std::array<double, 2> am{};
        alpha(s, std::span<const double>(zp.data(), k), std::span<double>(ap.data(), k));
        alpha(s, std::span<const double>(zm.data(), k), std::span<double>(am.data(), k));
        for (std::size_t r = 0; r < k; ++r) {
          const double fd = (ap[r] - am[r]) / (2 * eps);
          EXPECT_NEAR(fd, jac[r * k + c], 1e-5 * std::max(1.0, std::abs(fd)))
              << to_string(s.kind) << " z=" << z[0];
        }
      }
    }
  }
}

TEST(AlphaJacobian, SymmetricPositiveSemidefinite) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const auto s = spec(AlphaKind::p_laplace, 3.5, 1e-8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::array<double, 2> z{dist(rng), dist(rng)};
    std::array<double, 4> j{};
    alpha_jacobian(s, z, j);
    EXPECT_NEAR(j[1], j[2], 1e-14);
    EXPECT_GE(j[0], 0.0);
    EXPECT_GE(j[0] * j[3] - j[1] * j[2], -1e-12);
  }
}

TEST(Alpha, RegularizationConverges) {
  const std::array<double, 5> samples{0.0, 1e-3, 0.1, 0.7, 2.0};
  for (const auto kind : {AlphaKind::p_laplace, AlphaKind::porous_medium}) {
    const auto exact = spec(kind, 3.0, 0.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-4, 1e-8}) {
      const auto reg = spec(kind, 3.0, eps);
      double worst = 0.0;
      for (double z : samples) worst = std::max(worst, std::abs(alpha_scalar(reg, z) - alpha_scalar(exact, z)));
      EXPECT_LE(worst, 10.0 * std::pow(eps, 2.0));
      EXPECT_LE(worst, prev);
      prev = worst;
    }
  }
}

TEST(Assumption3, ShippedKindsAreMonotone) {
  for (const auto& s : shipped()) {
    const auto rep = check_assumption3(s, 10000, 10.0);
    EXPECT_EQ(rep.monotonicity_violations, 0u) << to_string(s.kind);
    EXPECT_TRUE(rep.ok()) << to_string(s.kind) << ": "
                          << (rep.failures.empty() ? "" : rep.failures.front());
    EXPECT_TRUE(rep.coercive);
  }
}

TEST(Assumption3, StefanCoercivityConstant) {
  auto s = spec(AlphaKind::stefan, 2.0, kDefaultStefanEps);
  s.a = 0.5;
  s.b = 2.0;
  const auto rep = check_assumption3(s, 10000, 100.0);
  EXPECT_EQ(rep.exponent, 2.0);
  EXPECT_NEAR(rep.c3, 0.5, 0.05);
}

TEST(Assumption3, AdversarialFixtureIsFlagged) {
  const auto rep = check_assumption3(spec(AlphaKind::adversarial, 2.0), 1000, 10.0);
  EXPECT_GT(rep.monotonicity_violations, 0u);
  EXPECT_FALSE(rep.ok());
}

TEST(Validate, ExponentRanges) {
  auto rejects = [](VectorFieldSpec s, int dim) {
    try {
      validate(s, dim);
    } catch (const Error& e) {
      return e.code() == ErrorCode::invalid_spec;
    }
    return false;
  };
  EXPECT_TRUE(rejects(spec(AlphaKind::p_laplace, 1.5), 1));
  EXPECT_TRUE(rejects(spec(AlphaKind::porous_medium, 1.9), 2));
  EXPECT_TRUE(rejects(spec(AlphaKind::fast_diffusion, 2.0), 1));
  EXPECT_TRUE(rejects(spec(AlphaKind::fast_diffusion, 1.1), 3));
  auto st = spec(AlphaKind::stefan, 2.0);
  st.a = 0.0;
  EXPECT_TRUE(rejects(st, 1));
  EXPECT_TRUE(rejects(spec(AlphaKind::adversarial, 2.0), 1));
  EXPECT_FALSE(rejects(spec(AlphaKind::fast_diffusion, 1.3), 2));
  EXPECT_FALSE(rejects(spec(AlphaKind::porous_medium, 2.0), 2));
}

TEST(AlphaKindNames, RoundTrip) {
  for (auto kind : {AlphaKind::p_laplace, AlphaKind::porous_medium, AlphaKind::fast_diffusion,
                    AlphaKind::stefan, AlphaKind::adversarial}) {
    EXPECT_EQ(alpha_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW((void)alpha_kind_from_string("nope"), Error);
}
