#pragma once

#include <Eigen/SparseCore>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddsplit/executor.hpp"
#include "ddsplit/operators.hpp"
#include "ddsplit/resolvent.hpp"

namespace ddsplit {

/// A Lipschitz perturbation g of the vector field (lower-order reaction or
/// advection). `lipschitz()` is the shift M of its dissipativity bound.
class Perturbation {
 public:
  virtual ~Perturbation() = default;
  [[nodiscard]] virtual Field apply(const Field& u) const = 0;
  /// d g / d u as a node-by-node matrix.
  [[nodiscard]] virtual Eigen::SparseMatrix<double> jacobian(const Field& u) const = 0;
  [[nodiscard]] virtual double lipschitz() const noexcept = 0;
  [[nodiscard]] virtual std::string describe() const = 0;
};

/// g(u) = -rate * u. Dissipative, so M = 0.
class LinearDecay final : public Perturbation {
 public:
  explicit LinearDecay(double rate) : rate_(rate) {}
  [[nodiscard]] Field apply(const Field& u) const override;
  [[nodiscard]] Eigen::SparseMatrix<double> jacobian(const Field& u) const override;
  [[nodiscard]] double lipschitz() const noexcept override { return rate_ < 0.0 ? -rate_ : 0.0; }
  [[nodiscard]] std::string describe() const override;
  [[nodiscard]] double rate() const noexcept { return rate_; }

 private:
  double rate_;
};

/// g(u) = rate * u * (1 - u) evaluated on u clamped to [lo, hi]; M is the
/// largest slope on that range.
class LogisticReaction final : public Perturbation {
 public:
  LogisticReaction(double rate, double lo = -1.0, double hi = 2.0);
  [[nodiscard]] Field apply(const Field& u) const override;
  [[nodiscard]] Eigen::SparseMatrix<double> jacobian(const Field& u) const override;
  [[nodiscard]] double lipschitz() const noexcept override;
  [[nodiscard]] std::string describe() const override;

 private:
  double rate_;
  double lo_;
  double hi_;
};

enum class SchemeKind {
  sum_splitting,
  lie_splitting,
  backward_euler,
  perturbed_modified,       // (I - h g)^{-1} B_h
  perturbed_semi_implicit,  // (I + h g) B_h
};

[[nodiscard]] std::string to_string(SchemeKind kind);
[[nodiscard]] SchemeKind scheme_kind_from_string(const std::string& name);

struct SchemeSpec {
  SchemeKind kind = SchemeKind::lie_splitting;
  /// Base step B_h of the perturbed kinds: sum, Lie or backward Euler.
  SchemeKind base = SchemeKind::lie_splitting;
  std::shared_ptr<const Perturbation> perturbation;
  /// Lie sweep order as subdomain indices; empty means ascending.
  std::vector<int> lie_order;
};

/// Problem, decomposition and solver settings shared by all steps.
class SplittingContext {
 public:
  SplittingContext(ProblemKind problem, std::shared_ptr<const PartitionOfUnity> pou,
                   SolverConfig cfg = {}, int threads = 1);

  [[nodiscard]] const ProblemKind& problem() const noexcept { return problem_; }
  [[nodiscard]] const PartitionOfUnity& pou() const noexcept { return *pou_; }
  [[nodiscard]] const Grid& grid() const noexcept { return pou_->grid(); }
  [[nodiscard]] Pivot pivot() const noexcept { return pivot_of(problem_.family); }
  [[nodiscard]] const SolverConfig& solver() const noexcept { return cfg_; }
  [[nodiscard]] const Executor& executor() const noexcept { return exec_; }
  [[nodiscard]] const SubOperator& full() const noexcept { return ops_.front(); }
  [[nodiscard]] const SubOperator& local(int l) const { return ops_.at(static_cast<std::size_t>(l) + 1); }
  [[nodiscard]] int subdomains() const noexcept { return pou_->size(); }

 private:
  ProblemKind problem_;
  std::shared_ptr<const PartitionOfUnity> pou_;
  SolverConfig cfg_;
  Executor exec_;
  std::vector<SubOperator> ops_;
};

struct StepStats {
  int solves = 0;
  int newton_iters = 0;
  int fallbacks = 0;

  StepStats& operator+=(const StepStats& o) noexcept {
    solves += o.solves;
    newton_iters += o.newton_iters;
    fallbacks += o.fallbacks;
    return *this;
  }
};

/// u_{n+1} = (1/s) sum_l (I - h s f_l)^{-1} u_n. The s solves run
/// concurrently; the average is summed in ascending l.
[[nodiscard]] Field step_sum(const SplittingContext& ctx, double h, const Field& u,
                             StepStats* stats = nullptr);

/// u_{n+1} = (I - h f_{l_s})^{-1} ... (I - h f_{l_1})^{-1} u_n in sweep order.
[[nodiscard]] Field step_lie(const SplittingContext& ctx, double h, const Field& u,
                             std::span<const int> order = {}, StepStats* stats = nullptr);

/// u_{n+1} = (I - h f)^{-1} u_n.
[[nodiscard]] Field step_backward_euler(const SplittingContext& ctx, double h, const Field& u,
                                        StepStats* stats = nullptr);

/// Modified or semi-implicit perturbed step around the scheme's base step.
/// Throws Error{step_too_large} if M > 0 and h >= 1/M.
[[nodiscard]] Field step_perturbed(const SchemeSpec& scheme, const SplittingContext& ctx, double h,
                                   const Field& u, StepStats* stats = nullptr);

/// One step of any scheme kind.
[[nodiscard]] Field step(const SchemeSpec& scheme, const SplittingContext& ctx, double h,
                         const Field& u, StepStats* stats = nullptr);

/// Solves w - h g(w) = y by Newton in the pivot norm.
[[nodiscard]] Field solve_perturbation_resolvent(const Perturbation& g, Pivot pivot, double h,
                                                 const Field& y, const SolverConfig& cfg,
                                                 StepStats* stats = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<StepStats> stats;  // one per step
};

/// n steps of size (t_end - t_start) / n from eta at t_start. Step failures
/// are rethrown as NonConvergence / Error with the step index in the message.
[[nodiscard]] Trajectory integrate(const SchemeSpec& scheme, const SplittingContext& ctx,
                                   const Field& eta, double t_end, int n, double t_start = 0.0);

}  // namespace ddsplit
