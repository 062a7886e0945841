#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ddsplit/grid.hpp"

namespace ddsplit {

/// Inclusive node-index box; axis 1 is {0, 0} on 1D grids.
struct IndexBox {
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};

  [[nodiscard]] bool contains(std::array<int, 2> ij, int dim) const noexcept {
    for (int a = 0; a < dim; ++a) {
      if (ij[a] < lo[a] || ij[a] > hi[a]) return false;
    }
    return true;
  }
  friend bool operator==(const IndexBox&, const IndexBox&) = default;
};

/// How a subdomain's region is described.
///  - box: the single box `components[0]`.
///  - frame: the grid minus the open box `hole`, stored as disjoint boxes in
///    `components` (two intervals in 1D, four slabs in 2D).
enum class SubdomainShape { box, frame };

struct Subdomain {
  int id = 0;
  SubdomainShape shape = SubdomainShape::box;
  std::vector<IndexBox> components;
  IndexBox hole;  // frame only
  std::vector<std::size_t> node_set;  // sorted
};

enum class LayoutKind { strips, blocks, separating };

struct DecompositionLayout {
  LayoutKind kind = LayoutKind::strips;
  /// Number of subdomains for strips/separating; ignored for blocks.
  int count = 1;
  /// Blocks per axis (blocks only).
  std::array<int, 2> blocks{1, 1};
  /// Physical overlap width, snapped to whole cells on each axis.
  double overlap = 0.0;
  /// Width of the boundary frame (separating only). Zero picks a quarter of
  /// each axis extent.
  double frame_width = 0.0;
};

/// Throws Error{infeasible_layout} when the overlap is below two cells,
/// subdomains would overlap three deep, or (separating) the interior
/// subdomains would reach the hull.
[[nodiscard]] std::vector<Subdomain> build_decomposition(const Grid& grid,
                                                         const DecompositionLayout& layout);

/// Nonnegative weights chi_l per node and per face, summing to one.
class PartitionOfUnity {
 public:
  PartitionOfUnity(Grid grid, std::vector<Subdomain> subdomains,
                   std::vector<std::vector<double>> node_weights,
                   std::vector<std::vector<double>> face_weights, double overlap_width);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] int size() const noexcept { return static_cast<int>(subdomains_.size()); }
  [[nodiscard]] const Subdomain& subdomain(int l) const { return subdomains_.at(l); }
  [[nodiscard]] const std::vector<Subdomain>& subdomains() const noexcept { return subdomains_; }
  [[nodiscard]] std::span<const double> node_weights(int l) const { return node_w_.at(l); }
  [[nodiscard]] std::span<const double> face_weights(int l) const { return face_w_.at(l); }
  /// Nodes with positive node weight, sorted.
  [[nodiscard]] std::span<const std::size_t> support(int l) const { return support_.at(l); }
  [[nodiscard]] double overlap_width() const noexcept { return overlap_width_; }

 private:
  Grid grid_;
  std::vector<Subdomain> subdomains_;
  std::vector<std::vector<double>> node_w_;
  std::vector<std::vector<double>> face_w_;
  std::vector<std::vector<std::size_t>> support_;
  double overlap_width_;
};

/// Piecewise-linear weights: on each axis a clamped ramp of width
/// `overlap_width` rises from every box side that does not lie on the hull;
/// box weights are the product of their axis ramps and a frame takes one
/// minus the product of the ramps grown outward from its hole. The raw
/// weights are then normalized. Throws Error{uncovered_node} if some node or
/// face gets zero total weight.
[[nodiscard]] PartitionOfUnity build_partition_of_unity(const Grid& grid,
                                                        std::vector<Subdomain> subdomains,
                                                        double overlap_width);

/// True iff no node of the union of subdomains 0..s-2 lies on the hull.
/// False when s < 2.
[[nodiscard]] bool check_separating_condition(std::span<const Subdomain> subdomains,
                                              const Grid& grid);

/// Nodes where chi_l > 0 at the node or an incident face, grown by one ring
/// of neighbours (8-neighbourhood in 2D). Sorted.
[[nodiscard]] std::vector<std::size_t> support_closure(const PartitionOfUnity& pou, int l);

/// Splits a node set into its 4-connected components, each sorted, ordered
/// by smallest node.
[[nodiscard]] std::vector<std::vector<std::size_t>> connected_components(
    const Grid& grid, std::span<const std::size_t> nodes);

}  // namespace ddsplit
