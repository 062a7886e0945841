#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ddsplit/executor.hpp"
#include "ddsplit/grid.hpp"
#include "ddsplit/operators.hpp"

namespace ddsplit {

struct SolverConfig {
  double tol_abs = 1e-11;
  double tol_rel = 1e-9;
  int max_newton = 50;
  int max_backtrack = 30;
  double armijo_c = 1e-4;
  int fallback_picard = 200;
};

/// Throws Error{invalid_params} for nonpositive entries or tol_abs > 1e-6.
void validate(const SolverConfig& cfg);

struct ResolventResult {
  Field u;
  int newton_iters = 0;
  double residual = 0.0;
  bool used_fallback = false;
};

/// Both Newton and the fallback iteration ran out of iterations.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Field best, double residual)
      : Error(ErrorCode::non_convergence, what), best_(std::move(best)), residual_(residual) {}

  [[nodiscard]] const Field& best_iterate() const noexcept { return best_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  Field best_;
  double residual_;
};

/// Solves u - tau * f_l(u) = g, i.e. applies (I - tau f_l)^{-1} to g.
///
/// Unknowns are restricted to the operator's support (minus hull nodes for
/// the Dirichlet family); every connected component of the support is an
/// independent system and runs on `exec` when given. Each component is
/// solved by Newton with Armijo backtracking on the pivot-norm residual,
/// starting from g. If Newton stalls, a damped lagged-coefficient iteration
/// takes over. On success ||u - tau f_l u - g||_H <= tol_abs + tol_rel ||g||_H
/// and u == g outside the support.
///
/// Throws Error{invalid_step} for tau <= 0 and NonConvergence when both
/// iterations fail.
[[nodiscard]] ResolventResult solve_resolvent(const SubOperator& op, double tau, const Field& g,
                                              const SolverConfig& cfg,
                                              const Executor* exec = nullptr);

/// max ||R u - R v||_H / ||u - v||_H over the pairs, R = (I - tau f_l)^{-1}.
/// Identical pairs are skipped.
[[nodiscard]] double nonexpansivity_audit(const SubOperator& op, double tau,
                                          std::span<const std::pair<Field, Field>> pairs,
                                          const SolverConfig& cfg);

struct YosidaRow {
  double tau = 0.0;
  double defect = 0.0;
};

/// Defect || sum_l f_l (I - tau s f_l)^{-1} u - f u ||_H for each tau, with
/// s = ops.size() and f the full operator of the same problem.
[[nodiscard]] std::vector<YosidaRow> yosida_consistency(std::span<const SubOperator> ops,
                                                        const Field& u,
                                                        std::span<const double> taus,
                                                        const SolverConfig& cfg);

}  // namespace ddsplit
