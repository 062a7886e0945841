#include "ddsplit/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <numeric>

namespace ddsplit {

void validate(const ProblemKind& problem, int dim) {
  validate(problem.spec, dim);
  const bool gradient_map = problem.spec.kind == AlphaKind::p_laplace;
  if (problem.family == Family::p_laplace_neumann && !gradient_map) {
    throw Error(ErrorCode::invalid_spec,
                fmt::format("family p_laplace_neumann needs alpha kind p_laplace, got {}",
                            to_string(problem.spec.kind)));
  }
  if (problem.family == Family::porous_medium_dirichlet && gradient_map) {
    throw Error(ErrorCode::invalid_spec,
                "family porous_medium_dirichlet needs a scalar alpha kind "
                "(porous_medium, fast_diffusion or stefan)");
  }
}

Pivot pivot_of(Family family) noexcept {
  return family == Family::p_laplace_neumann ? Pivot::l2 : Pivot::hminus1;
}

std::string to_string(Family family) {
  return family == Family::p_laplace_neumann ? "p_laplace_neumann" : "porous_medium_dirichlet";
}

Family family_from_string(const std::string& name) {
  if (name == "p_laplace_neumann") return Family::p_laplace_neumann;
  if (name == "porous_medium_dirichlet") return Family::porous_medium_dirichlet;
  throw Error(ErrorCode::invalid_spec, fmt::format("unknown problem family '{}'", name));
}

SubOperator SubOperator::full(const ProblemKind& problem, const Grid& grid) {
  validate(problem, grid.dim());
  SubOperator op(problem, grid);
  op.support_.resize(grid.node_count());
  std::iota(op.support_.begin(), op.support_.end(), std::size_t{0});
  op.components_.push_back(op.support_);
  return op;
}

SubOperator SubOperator::local(const ProblemKind& problem,
                               std::shared_ptr<const PartitionOfUnity> pou, int l) {
  validate(problem, pou->grid().dim());
  SubOperator op(problem, pou->grid());
  op.index_ = l;
  op.node_w_ = pou->node_weights(l);
  op.face_w_ = pou->face_weights(l);
  op.support_ = support_closure(*pou, l);
  op.components_ = connected_components(op.grid_, op.support_);
  op.pou_ = std::move(pou);
  return op;
}

std::vector<SubOperator> make_local_operators(const ProblemKind& problem,
                                              std::shared_ptr<const PartitionOfUnity> pou) {
  std::vector<SubOperator> ops;
  ops.push_back(SubOperator::full(problem, pou->grid()));
  for (int l = 0; l < pou->size(); ++l) ops.push_back(SubOperator::local(problem, pou, l));
  return ops;
}

Field apply(const SubOperator& op, const Field& u) {
  require_same_grid(op.grid(), u.grid());
  const Grid& g = u.grid();
  const auto& spec = op.problem().spec;
  if (op.problem().family == Family::p_laplace_neumann) {
    FluxField q = gradient(u);
    std::array<double, 2> a{};
    const auto k = static_cast<std::size_t>(g.dim());
    for (std::size_t f = 0; f < g.face_count(); ++f) {
      auto qf = q.at(f);
      const double chi = op.face_weight(f);
      if (chi == 0.0) {
        std::fill(qf.begin(), qf.end(), 0.0);
        continue;
      }
      alpha(spec, qf, std::span<double>(a.data(), k));
      for (std::size_t c = 0; c < k; ++c) qf[c] = chi * a[c];
    }
    return divergence_neumann(q);
  }
  Field w(g);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const double chi = op.node_weight(node);
    if (chi == 0.0 || g.is_boundary(node)) continue;
    w[node] = chi * alpha_scalar(spec, u[node]);
  }
  return dirichlet_laplacian(w);
}

double decomposition_residual(const ProblemKind& problem,
                              std::shared_ptr<const PartitionOfUnity> pou, const Field& u) {
  const Field full = apply(SubOperator::full(problem, pou->grid()), u);
  Field sum(u.grid());
  for (int l = 0; l < pou->size(); ++l) sum += apply(SubOperator::local(problem, pou, l), u);
  return l2_norm(full - sum) / std::max(1.0, l2_norm(full));
}

double dissipativity_gap(const SubOperator& op, const Field& u, const Field& v) {
  return pivot_inner(op.pivot(), apply(op, u) - apply(op, v), u - v);
}

}  // namespace ddsplit
