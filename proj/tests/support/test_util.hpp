#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <span>
#include <vector>
#include <array>
#include <memory>

#include "ddsplit/grid.hpp"

namespace ddsplit::testing {

inline Field random_field(const Grid& g, std::mt19937_64& rng, bool zero_hull = false,
                          double amplitude = 1.0) {
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  Field u(g);
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    const double v = dist(rng);
    u[j] = zero_hull && g.is_boundary(j) ? 0.0 : v;
  }
  return u;
}

inline Eigen::VectorXd to_vec(const Field& u) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) v[static_cast<Eigen::Index>(i)] = u[i];
  return v;
}

inline Field to_field(const Grid& g, const Eigen::VectorXd& v) {
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = v[static_cast<Eigen::Index>(i)];
  return u;
}

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

// 1D zero-flux Laplacian with trapezoid node weights (dx/2 at the ends) and
// face weights dx, each face flux scaled by chi[face].
inline Eigen::MatrixXd neumann_matrix_1d(int n, double dx, std::span<const double> chi) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int f = 0; f < n - 1; ++f) {
    const double c = chi.empty() ? 1.0 : chi[static_cast<std::size_t>(f)];
    const double w_left = f == 0 ? dx / 2 : dx;
    const double w_right = f + 1 == n - 1 ? dx / 2 : dx;
    // flux q = c (u_{f+1} - u_f) / dx enters node f as +q / w_f, node f+1 as -q / w_{f+1}.
    const double s_left = c / (dx * w_left);
    const double s_right = c / (dx * w_right);
    a(f, f) -= s_left;
    a(f, f + 1) += s_left;
    a(f + 1, f + 1) -= s_right;
    a(f + 1, f) += s_right;
  }
  return a;
}

// 1D second difference with zero Dirichlet data applied to chi * u; rows and
// columns of the two hull nodes are zero.
inline Eigen::MatrixXd dirichlet_matrix_1d(int n, double dx, std::span<const double> chi) {
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n - 1; ++i) {
    if (i - 1 > 0) d2(i, i - 1) = 1.0 / (dx * dx);
    d2(i, i) = -2.0 / (dx * dx);
    if (i + 1 < n - 1) d2(i, i + 1) = 1.0 / (dx * dx);
  }
  Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n - 1; ++i) scale(i, i) = chi.empty() ? 1.0 : chi[static_cast<std::size_t>(i)];
  return d2 * scale;
}

}  // namespace ddsplit::testing

#include "ddsplit/decomposition.hpp"
#include "ddsplit/operators.hpp"

namespace ddsplit::testing {

inline Grid line(int n, double lo = 0.0, double hi = 1.0) {
  const std::array<int, 1> nn{n};
  const std::array<double, 1> l{lo};
  const std::array<double, 1> h{hi};
  return build_grid(1, nn, l, h);
}

inline Grid square(int nx, int ny, double lo = 0.0, double hi = 1.0) {
  const std::array<int, 2> nn{nx, ny};
  const std::array<double, 2> l{lo, lo};
  const std::array<double, 2> h{hi, hi};
  return build_grid(2, nn, l, h);
}

inline DecompositionLayout strips(int s, double overlap) {
  DecompositionLayout l;
  l.kind = LayoutKind::strips;
  l.count = s;
  l.overlap = overlap;
  return l;
}

inline DecompositionLayout separating(int s, double overlap) {
  DecompositionLayout l;
  l.kind = LayoutKind::separating;
  l.count = s;
  l.overlap = overlap;
  return l;
}

inline DecompositionLayout blocks(int bx, int by, double overlap) {
  DecompositionLayout l;
  l.kind = LayoutKind::blocks;
  l.blocks = {bx, by};
  l.overlap = overlap;
  return l;
}

inline std::shared_ptr<const PartitionOfUnity> make_pou(const Grid& g,
                                                        const DecompositionLayout& layout) {
  const double w = layout.overlap > 0.0 ? layout.overlap : 2.0 * g.dx(0);
  return std::make_shared<const PartitionOfUnity>(
      build_partition_of_unity(g, build_decomposition(g, layout), w));
}

inline ProblemKind plaplace(double p, double eps = 1e-8) {
  ProblemKind k;
  k.family = Family::p_laplace_neumann;
  k.spec.kind = AlphaKind::p_laplace;
  k.spec.p = p;
  k.spec.eps_reg = eps;
  return k;
}

inline ProblemKind porous(double p, double eps = 1e-8) {
  ProblemKind k;
  k.family = Family::porous_medium_dirichlet;
  k.spec.kind = AlphaKind::porous_medium;
  k.spec.p = p;
  k.spec.eps_reg = eps;
  return k;
}

}  // namespace ddsplit::testing
