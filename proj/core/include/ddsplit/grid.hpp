#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ddsplit/error.hpp"

namespace ddsplit {

namespace detail {
struct GridData;
}

enum class NodeKind : unsigned char { interior, boundary };

/// One term of a face-gradient stencil: coefficient applied to a nodal value.
struct StencilEntry {
  std::size_t node;
  double coef;
};

/// Uniform vertex-centered tensor grid on a box in 1D or 2D.
///
/// Nodes are numbered x-fastest: node = i + n[0] * j. Faces join adjacent
/// nodes; all axis-0 faces come first, then axis-1 faces. Every face carries
/// a full gradient vector (normal difference plus, in 2D, the tangential
/// component averaged from the neighbouring axis differences), so the face
/// gradient and the Neumann divergence are exact adjoints of each other
/// under the node and face quadrature weights.
///
/// Grid is a cheap handle; copies share the same immutable data.
class Grid {
 public:
  [[nodiscard]] int dim() const noexcept;
  [[nodiscard]] int n(int axis) const noexcept;
  [[nodiscard]] double lo(int axis) const noexcept;
  [[nodiscard]] double hi(int axis) const noexcept;
  [[nodiscard]] double dx(int axis) const noexcept;

  [[nodiscard]] std::size_t node_count() const noexcept;
  [[nodiscard]] std::size_t face_count() const noexcept;
  [[nodiscard]] std::size_t interior_count() const noexcept;

  [[nodiscard]] std::size_t node_index(int i, int j = 0) const noexcept;
  [[nodiscard]] std::array<int, 2> node_ij(std::size_t node) const noexcept;
  [[nodiscard]] std::array<double, 2> node_coords(std::size_t node) const noexcept;
  [[nodiscard]] NodeKind node_kind(std::size_t node) const noexcept;
  [[nodiscard]] bool is_boundary(std::size_t node) const noexcept {
    return node_kind(node) == NodeKind::boundary;
  }
  [[nodiscard]] std::span<const NodeKind> boundary_mask() const noexcept;

  /// Trapezoidal quadrature weight of a node (dx^d, halved per boundary axis).
  [[nodiscard]] double node_weight(std::size_t node) const noexcept;
  [[nodiscard]] std::span<const double> node_weights() const noexcept;

  [[nodiscard]] int face_axis(std::size_t face) const noexcept;
  /// The two nodes joined by a face, lower index first.
  [[nodiscard]] std::array<std::size_t, 2> face_nodes(std::size_t face) const noexcept;
  [[nodiscard]] std::array<double, 2> face_midpoint(std::size_t face) const noexcept;
  [[nodiscard]] double face_weight(std::size_t face) const noexcept;
  /// Stencil of gradient component `component` at `face`.
  [[nodiscard]] std::span<const StencilEntry> face_stencil(std::size_t face,
                                                          int component) const noexcept;

  /// Dense position of a node among interior nodes, or -1 on the hull.
  [[nodiscard]] long interior_position(std::size_t node) const noexcept;
  [[nodiscard]] std::span<const std::size_t> interior_nodes() const noexcept;

  /// Structural equality (same dim, counts and extents).
  [[nodiscard]] bool same_as(const Grid& other) const noexcept;

  [[nodiscard]] const detail::GridData& data() const noexcept { return *data_; }

 private:
  friend Grid build_grid(int, std::span<const int>, std::span<const double>,
                         std::span<const double>);
  explicit Grid(std::shared_ptr<const detail::GridData> data) : data_(std::move(data)) {}

  std::shared_ptr<const detail::GridData> data_;
};

/// Throws Error{invalid_extent} if hi <= lo, Error{too_coarse} if n < 3.
[[nodiscard]] Grid build_grid(int dim, std::span<const int> n_per_axis,
                              std::span<const double> lo, std::span<const double> hi);

/// Nodal values on a grid; an element of the discrete pivot space.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double& operator[](std::size_t i) noexcept { return values_[i]; }
  [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

  [[nodiscard]] bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double scale) noexcept;
  /// this += scale * other
  Field& axpy(double scale, const Field& other);

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_.same_as(b.grid_) && a.values_ == b.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
};

[[nodiscard]] Field operator+(Field a, const Field& b);
[[nodiscard]] Field operator-(Field a, const Field& b);
[[nodiscard]] Field operator*(double s, Field a);

/// Per-face gradient vectors: `dim` components per face, face-major.
class FluxField {
 public:
  explicit FluxField(Grid grid);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] int components() const noexcept { return grid_.dim(); }
  [[nodiscard]] std::span<double> at(std::size_t face) noexcept;
  [[nodiscard]] std::span<const double> at(std::size_t face) const noexcept;
  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Throws Error{grid_mismatch} unless both live on the same grid.
void require_same_grid(const Grid& a, const Grid& b);

[[nodiscard]] FluxField gradient(const Field& u);
/// Negative adjoint of `gradient` with zero flux through the hull.
[[nodiscard]] Field divergence_neumann(const FluxField& q);
/// 3-/5-point Laplacian with homogeneous Dirichlet values. Hull entries of the
/// input are ignored and hull entries of the output are zero.
[[nodiscard]] Field dirichlet_laplacian(const Field& w);

[[nodiscard]] double l2_inner(const Field& u, const Field& v);
[[nodiscard]] double l2_norm(const Field& u);
/// Face quadrature inner product of two flux fields.
[[nodiscard]] double face_inner(const FluxField& a, const FluxField& b);

/// Solves (-dirichlet_laplacian) x = v on interior nodes; hull of x is zero.
[[nodiscard]] Field inverse_dirichlet_laplacian(const Field& v);
[[nodiscard]] double hminus1_inner(const Field& u, const Field& v);
[[nodiscard]] double hminus1_norm(const Field& u);

/// The Hilbert space in which a problem's errors and contractivity live.
enum class Pivot { l2, hminus1 };

[[nodiscard]] double pivot_inner(Pivot pivot, const Field& u, const Field& v);
[[nodiscard]] double pivot_norm(Pivot pivot, const Field& u);

}  // namespace ddsplit
