#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "ddsplit/grid.hpp"
#include "test_util.hpp"

using namespace ddsplit;
using ddsplit::testing::random_field;

namespace {

Grid line(int n, double lo = 0.0, double hi = 1.0) {
  const std::array<int, 1> nn{n};
  const std::array<double, 1> l{lo};
  const std::array<double, 1> h{hi};
  return build_grid(1, nn, l, h);
}

Grid square(int nx, int ny, double lo = 0.0, double hi = 1.0) {
  const std::array<int, 2> nn{nx, ny};
  const std::array<double, 2> l{lo, lo};
  const std::array<double, 2> h{hi, hi};
  return build_grid(2, nn, l, h);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::io_error;
}

}  // namespace

TEST(BuildGrid, OneDimensionalSpacingAndNodes) {
  const Grid g = line(5);
  EXPECT_EQ(g.node_count(), 5u);
  EXPECT_DOUBLE_EQ(g.dx(0), 0.25);
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(g.node_coords(g.node_index(i))[0], 0.25 * i);
  EXPECT_TRUE(g.is_boundary(0));
  EXPECT_TRUE(g.is_boundary(4));
  EXPECT_EQ(g.interior_count(), 3u);
}

TEST(BuildGrid, ThreeByThreeHasOneInteriorNode) {
  const Grid g = square(3, 3);
  EXPECT_EQ(g.node_count(), 9u);
  int boundary = 0;
  for (std::size_t j = 0; j < g.node_count(); ++j) boundary += g.is_boundary(j) ? 1 : 0;
  EXPECT_EQ(boundary, 8);
  EXPECT_EQ(g.interior_count(), 1u);
  EXPECT_FALSE(g.is_boundary(g.node_index(1, 1)));
}

TEST(BuildGrid, RejectsBadInput) {
  EXPECT_EQ(code_of([] { (void)line(2); }), ErrorCode::too_coarse);
  EXPECT_EQ(code_of([] { (void)line(5, 1.0, 1.0); }), ErrorCode::invalid_extent);
  EXPECT_EQ(code_of([] { (void)line(5, 1.0, 0.0); }), ErrorCode::invalid_extent);
  const std::array<int, 3> n{3, 3, 3};
  const std::array<double, 3> lo{0, 0, 0};
  const std::array<double, 3> hi{1, 1, 1};
  EXPECT_EQ(code_of([&] { (void)build_grid(3, n, lo, hi); }), ErrorCode::invalid_extent);
}

TEST(BuildGrid, NodeWeightsIntegrateVolume) {
  const Grid g1 = line(9, -1.0, 2.0);
  double s = 0.0;
  for (auto w : g1.node_weights()) s += w;
  EXPECT_NEAR(s, 3.0, 1e-14);
  const Grid g2 = square(7, 5, 0.0, 2.0);
  s = 0.0;
  for (auto w : g2.node_weights()) s += w;
  EXPECT_NEAR(s, 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(g2.node_weight(0), 0.25 * g2.dx(0) * g2.dx(1));
}

TEST(Gradient, ConstantFieldIsExactlyZero) {
  for (const Grid& g : {line(9), square(6, 5)}) {
    Field u(g);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = 3.7;
    const FluxField q = gradient(u);
    for (double v : q.values()) EXPECT_EQ(v, 0.0);
  }
}

TEST(Gradient, LinearFieldOneDimension) {
  const Grid g = line(11);
  Field u(g);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = g.node_coords(j)[0];
  const FluxField q = gradient(u);
  for (std::size_t f = 0; f < g.face_count(); ++f) EXPECT_NEAR(q.at(f)[0], 1.0, 1e-14);
}

TEST(Gradient, ForwardDifferencesOfSquares) {
  const Grid g = line(5);
  const double dx = g.dx(0);
  Field u(g);
  for (int i = 0; i < 5; ++i) u[static_cast<std::size_t>(i)] = i * i * dx * dx;
  const FluxField q = gradient(u);
  for (int i = 0; i < 4; ++i) {
    const double expect = ((i + 1) * (i + 1) - i * i) * dx * dx / dx;
    EXPECT_NEAR(q.at(static_cast<std::size_t>(i))[0], expect, 1e-15);
  }
}

TEST(Gradient, TwoDimensionalLinearFieldGivesFullVectorOnEveryFace) {
  const Grid g = square(6, 5);
  Field u(g);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const auto x = g.node_coords(j);
    u[j] = x[0] - 2.0 * x[1];
  }
  const FluxField q = gradient(u);
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    EXPECT_NEAR(q.at(f)[0], 1.0, 1e-13) << f;
    EXPECT_NEAR(q.at(f)[1], -2.0, 1e-13) << f;
  }
}

TEST(Divergence, ZeroFluxGivesZero) {
  const Grid g = square(5, 4);
  const Field d = divergence_neumann(FluxField(g));
  for (double v : d.values()) EXPECT_EQ(v, 0.0);
}

TEST(Divergence, UnitFluxOneDimension) {
  const Grid g = line(9);
  FluxField q(g);
  for (double& v : q.values()) v = 1.0;
  const Field d = divergence_neumann(q);
  const double dx = g.dx(0);
  // Boundary nodes carry half weight, so the outflow of one face is 2/dx there.
  EXPECT_NEAR(d[0], 2.0 / dx, 1e-12);
  EXPECT_NEAR(d[8], -2.0 / dx, 1e-12);
  for (std::size_t j = 1; j < 8; ++j) EXPECT_NEAR(d[j], 0.0, 1e-12);
}

TEST(Divergence, IntegrationByPartsHolds) {
  std::mt19937_64 rng(11);
  for (const Grid& g : {line(17), square(9, 7), square(5, 11, -1.0, 3.0)}) {
    for (int k = 0; k < 10; ++k) {
      const Field u = random_field(g, rng);
      const Field v = random_field(g, rng);
      const FluxField gu = gradient(u);
      const double lhs = l2_inner(divergence_neumann(gu), v);
      const double rhs = -face_inner(gu, gradient(v));
      EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(DirichletLaplacian, StencilArithmetic) {
  const Grid g = line(5);
  const double dx = g.dx(0);
  const Field w(g, {0, 1, 2, 1, 0});
  const Field l = dirichlet_laplacian(w);
  EXPECT_NEAR(l[1], 0.0, 1e-12);
  EXPECT_NEAR(l[2], -2.0 / (dx * dx), 1e-12);
  EXPECT_NEAR(l[3], 0.0, 1e-12);
  EXPECT_EQ(l[0], 0.0);
  EXPECT_EQ(l[4], 0.0);
  EXPECT_EQ(dirichlet_laplacian(Field(g)), Field(g));
}

TEST(DirichletLaplacian, DiscreteSineEigenpairs) {
  const Grid g = line(33);
  const double dx = g.dx(0);
  for (int k = 1; k <= 5; ++k) {
    Field w(g);
    for (std::size_t j = 0; j < w.size(); ++j) {
      w[j] = std::sin(k * std::numbers::pi * g.node_coords(j)[0]);
    }
    const Field l = dirichlet_laplacian(w);
    const double lambda = 2.0 / (dx * dx) * (1.0 - std::cos(k * std::numbers::pi * dx));
    for (const auto j : g.interior_nodes()) EXPECT_NEAR(l[j], -lambda * w[j], 1e-12 * lambda);
  }
}

TEST(DirichletLaplacian, SymmetricAndNegativeDefinite) {
  std::mt19937_64 rng(5);
  for (const Grid& g : {line(21), square(8, 9)}) {
    for (int k = 0; k < 10; ++k) {
      const Field u = random_field(g, rng, true);
      const Field v = random_field(g, rng, true);
      EXPECT_NEAR(l2_inner(dirichlet_laplacian(u), v), l2_inner(u, dirichlet_laplacian(v)), 1e-9);
      EXPECT_LT(l2_inner(dirichlet_laplacian(u), u), 0.0);
    }
  }
}

TEST(L2, ConstantAndQuadrature) {
  const Grid g = line(11);
  Field one(g);
  for (std::size_t j = 0; j < one.size(); ++j) one[j] = 1.0;
  EXPECT_NEAR(l2_norm(one), 1.0, 1e-14);

  const Grid fine = line(101);
  Field s(fine);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(std::numbers::pi * fine.node_coords(j)[0]);
  EXPECT_NEAR(l2_norm(s) * l2_norm(s), 0.5, 1e-3);
}

TEST(L2, ExactSymmetryAndMismatch) {
  std::mt19937_64 rng(3);
  const Grid g = square(6, 6);
  const Field u = random_field(g, rng);
  const Field v = random_field(g, rng);
  EXPECT_EQ(l2_inner(u, v), l2_inner(v, u));
  const Grid other = square(6, 7);
  EXPECT_EQ(code_of([&] { (void)l2_inner(u, Field(other)); }), ErrorCode::grid_mismatch);
}

TEST(HMinus1, ZeroAndSymmetry) {
  std::mt19937_64 rng(9);
  const Grid g = square(9, 9);
  EXPECT_EQ(hminus1_norm(Field(g)), 0.0);
  const Field u = random_field(g, rng);
  const Field v = random_field(g, rng);
  EXPECT_NEAR(hminus1_inner(u, v), hminus1_inner(v, u), 1e-12);
}

TEST(HMinus1, DefinitionUnwound) {
  std::mt19937_64 rng(21);
  for (const Grid& g : {line(31), square(10, 8)}) {
    const Field w = random_field(g, rng, true);
    const Field u = -1.0 * dirichlet_laplacian(w);
    EXPECT_NEAR(hminus1_inner(u, u), l2_inner(u, w), 1e-12 * std::abs(l2_inner(u, w)));
  }
}

TEST(HMinus1, MatchesDenseInverse) {
  std::mt19937_64 rng(2);
  const Grid g = line(17);
  const int n = 17;
  const double dx = g.dx(0);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n - 2, n - 2);
  for (int i = 0; i < n - 2; ++i) {
    k(i, i) = 2.0 / (dx * dx);
    if (i > 0) k(i, i - 1) = -1.0 / (dx * dx);
    if (i + 1 < n - 2) k(i, i + 1) = -1.0 / (dx * dx);
  }
  const Field u = random_field(g, rng);
  const Field v = random_field(g, rng);
  Eigen::VectorXd ui(n - 2), vi(n - 2);
  for (int i = 0; i < n - 2; ++i) {
    ui[i] = u[static_cast<std::size_t>(i + 1)];
    vi[i] = v[static_cast<std::size_t>(i + 1)];
  }
  const double expect = dx * ui.dot(k.ldlt().solve(vi));
  EXPECT_NEAR(hminus1_inner(u, v), expect, 1e-12 * std::max(1.0, std::abs(expect)));
}

TEST(HMinus1, PositiveUnlessInteriorVanishes) {
  const Grid g = square(7, 7);
  Field hull_only(g);
  for (std::size_t j = 0; j < g.node_count(); ++j) hull_only[j] = g.is_boundary(j) ? 5.0 : 0.0;
  EXPECT_EQ(hminus1_norm(hull_only), 0.0);
  Field one_node(g);
  one_node[g.node_index(3, 3)] = 1e-3;
  EXPECT_GT(hminus1_norm(one_node), 0.0);
}

TEST(Field, ArithmeticAndFiniteness) {
  const Grid g = line(5);
  Field a(g, {1, 2, 3, 4, 5});
  const Field b(g, {5, 4, 3, 2, 1});
  const Field c = a + b;
  for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(c[j], 6.0);
  a.axpy(-1.0, a);
  EXPECT_EQ(a, Field(g));
  EXPECT_TRUE(a.all_finite());
  a[2] = std::nan("");
  EXPECT_FALSE(a.all_finite());
}
