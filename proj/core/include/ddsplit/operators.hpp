#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ddsplit/decomposition.hpp"
#include "ddsplit/grid.hpp"
#include "ddsplit/vectorfields.hpp"

namespace ddsplit {

enum class Family {
  p_laplace_neumann,        // u_t = div(alpha(grad u)), zero-flux hull
  porous_medium_dirichlet,  // u_t = lap(alpha(u)), alpha(u) = 0 on the hull
};

struct ProblemKind {
  Family family = Family::p_laplace_neumann;
  VectorFieldSpec spec;
};

/// Throws Error{invalid_spec} if the alpha kind does not fit the family.
void validate(const ProblemKind& problem, int dim);

[[nodiscard]] Pivot pivot_of(Family family) noexcept;
[[nodiscard]] std::string to_string(Family family);
[[nodiscard]] Family family_from_string(const std::string& name);

/// One piece f_l of the decomposed vector field, or the full field f.
///
/// Holds the weights chi_l it multiplies alpha with (faces for the flux form,
/// nodes for the Laplacian form), the node set outside of which it acts as
/// zero, and that set split into independent components.
class SubOperator {
 public:
  static constexpr int kFull = -1;

  [[nodiscard]] static SubOperator full(const ProblemKind& problem, const Grid& grid);
  [[nodiscard]] static SubOperator local(const ProblemKind& problem,
                                         std::shared_ptr<const PartitionOfUnity> pou, int l);

  [[nodiscard]] const ProblemKind& problem() const noexcept { return problem_; }
  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] Pivot pivot() const noexcept { return pivot_of(problem_.family); }
  [[nodiscard]] int index() const noexcept { return index_; }
  [[nodiscard]] bool is_full() const noexcept { return index_ == kFull; }

  [[nodiscard]] double node_weight(std::size_t node) const noexcept {
    return node_w_.empty() ? 1.0 : node_w_[node];
  }
  [[nodiscard]] double face_weight(std::size_t face) const noexcept {
    return face_w_.empty() ? 1.0 : face_w_[face];
  }
  /// Sorted node set outside of which apply() vanishes.
  [[nodiscard]] std::span<const std::size_t> support() const noexcept { return support_; }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& components() const noexcept {
    return components_;
  }

 private:
  SubOperator(ProblemKind problem, Grid grid) : problem_(std::move(problem)), grid_(std::move(grid)) {}

  ProblemKind problem_;
  Grid grid_;
  std::shared_ptr<const PartitionOfUnity> pou_;
  int index_ = kFull;
  std::span<const double> node_w_;
  std::span<const double> face_w_;
  std::vector<std::size_t> support_;
  std::vector<std::vector<std::size_t>> components_;
};

/// The full operator followed by one SubOperator per subdomain.
[[nodiscard]] std::vector<SubOperator> make_local_operators(
    const ProblemKind& problem, std::shared_ptr<const PartitionOfUnity> pou);

/// p-Laplace: divergence_neumann(chi_face * alpha(gradient u)).
/// Porous medium: dirichlet_laplacian(chi_node * alpha(u)), zero on the hull.
[[nodiscard]] Field apply(const SubOperator& op, const Field& u);

/// ||f u - sum_l f_l u||_L2 / max(1, ||f u||_L2) in both families.
[[nodiscard]] double decomposition_residual(const ProblemKind& problem,
                                            std::shared_ptr<const PartitionOfUnity> pou,
                                            const Field& u);

/// <f u - f v, u - v>_H in the problem's pivot space; nonpositive for a
/// dissipative operator.
[[nodiscard]] double dissipativity_gap(const SubOperator& op, const Field& u, const Field& v);

}  // namespace ddsplit
