#include "ddsplit/integrators.hpp"

#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddsplit {

// ---------------------------------------------------------------------------
// Perturbations

Field LinearDecay::apply(const Field& u) const { return (-rate_) * u; }

Eigen::SparseMatrix<double> LinearDecay::jacobian(const Field& u) const {
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::SparseMatrix<double> j(n, n);
  j.setIdentity();
  return -rate_ * j;
}

std::string LinearDecay::describe() const { return fmt::format("linear_decay(rate={})", rate_); }

LogisticReaction::LogisticReaction(double rate, double lo, double hi)
    : rate_(rate), lo_(lo), hi_(hi) {
  if (!(hi > lo)) throw Error(ErrorCode::invalid_params, "logistic clamp range must have hi > lo");
}

Field LogisticReaction::apply(const Field& u) const {
  Field out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::clamp(u[i], lo_, hi_);
    out[i] = rate_ * v * (1.0 - v);
  }
  return out;
}

Eigen::SparseMatrix<double> LogisticReaction::jacobian(const Field& u) const {
  const auto n = static_cast<Eigen::Index>(u.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = u[static_cast<std::size_t>(i)];
    if (v > lo_ && v < hi_) trip.emplace_back(i, i, rate_ * (1.0 - 2.0 * v));
  }
  Eigen::SparseMatrix<double> j(n, n);
  j.setFromTriplets(trip.begin(), trip.end());
  return j;
}

double LogisticReaction::lipschitz() const noexcept {
  return std::abs(rate_) * std::max(std::abs(1.0 - 2.0 * lo_), std::abs(1.0 - 2.0 * hi_));
}

std::string LogisticReaction::describe() const {
  return fmt::format("logistic(rate={}, clamp=[{}, {}])", rate_, lo_, hi_);
}

// ---------------------------------------------------------------------------

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::sum_splitting: return "sum";
    case SchemeKind::lie_splitting: return "lie";
    case SchemeKind::backward_euler: return "backward_euler";
    case SchemeKind::perturbed_modified: return "perturbed_modified";
    case SchemeKind::perturbed_semi_implicit: return "perturbed_semi_implicit";
  }
  return "unknown";
}

SchemeKind scheme_kind_from_string(const std::string& name) {
  for (auto k : {SchemeKind::sum_splitting, SchemeKind::lie_splitting, SchemeKind::backward_euler,
                 SchemeKind::perturbed_modified, SchemeKind::perturbed_semi_implicit}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::config_error, fmt::format("unknown scheme '{}'", name));
}

SplittingContext::SplittingContext(ProblemKind problem,
                                   std::shared_ptr<const PartitionOfUnity> pou, SolverConfig cfg,
                                   int threads)
    : problem_(std::move(problem)), pou_(std::move(pou)), cfg_(cfg), exec_(threads) {
  validate(cfg_);
  ops_ = make_local_operators(problem_, pou_);
}

namespace {

void record(StepStats* stats, const ResolventResult& r) {
  if (stats == nullptr) return;
  stats->solves += 1;
  stats->newton_iters += r.newton_iters;
  stats->fallbacks += r.used_fallback ? 1 : 0;
}

void require_positive_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorCode::invalid_step, fmt::format("step must be positive, got {}", h));
  }
}

}  // namespace

Field step_sum(const SplittingContext& ctx, double h, const Field& u, StepStats* stats) {
  require_positive_step(h);
  const int s = ctx.subdomains();
  std::vector<std::optional<ResolventResult>> parts(static_cast<std::size_t>(s));
  ctx.executor().parallel_for(parts.size(), [&](std::size_t l) {
    parts[l] = solve_resolvent(ctx.local(static_cast<int>(l)), s * h, u, ctx.solver());
  });
  Field out(u.grid());
  for (const auto& part : parts) {
    out += part->u;
    record(stats, *part);
  }
  out *= 1.0 / s;
  return out;
}

Field step_lie(const SplittingContext& ctx, double h, const Field& u, std::span<const int> order,
               StepStats* stats) {
  require_positive_step(h);
  std::vector<int> ascending;
  if (order.empty()) {
    ascending.resize(static_cast<std::size_t>(ctx.subdomains()));
    std::iota(ascending.begin(), ascending.end(), 0);
    order = ascending;
  }
  Field v = u;
  for (const int l : order) {
    auto r = solve_resolvent(ctx.local(l), h, v, ctx.solver(), &ctx.executor());
    record(stats, r);
    v = std::move(r.u);
  }
  return v;
}

Field step_backward_euler(const SplittingContext& ctx, double h, const Field& u,
                          StepStats* stats) {
  require_positive_step(h);
  auto r = solve_resolvent(ctx.full(), h, u, ctx.solver());
  record(stats, r);
  return std::move(r.u);
}

Field solve_perturbation_resolvent(const Perturbation& g, Pivot pivot, double h, const Field& y,
                                   const SolverConfig& cfg, StepStats* stats) {
  const double tol = cfg.tol_abs + cfg.tol_rel * pivot_norm(pivot, y);
  Field w = y;
  auto residual = [&](const Field& x) {
    Field r = x;
    r.axpy(-h, g.apply(x));
    r -= y;
    return r;
  };
  Field r = residual(w);
  double rn = pivot_norm(pivot, r);
  const auto n = static_cast<Eigen::Index>(y.size());
  int iters = 0;
  while (rn > tol) {
    if (iters >= cfg.max_newton) {
      throw NonConvergence(
          fmt::format("perturbation resolvent did not converge (residual {:.3e})", rn), w, rn);
    }
    Eigen::SparseMatrix<double> jac(n, n);
    jac.setIdentity();
    jac -= h * g.jacobian(w);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) rhs[i] = -r[static_cast<std::size_t>(i)];
    const Eigen::VectorXd delta = lu.solve(rhs);
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= cfg.max_backtrack; ++bt) {
      Field trial = w;
      for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] += lambda * delta[i];
      Field rt = residual(trial);
      const double tn = pivot_norm(pivot, rt);
      if (std::isfinite(tn) && tn <= (1.0 - cfg.armijo_c * lambda) * rn) {
        w = std::move(trial);
        r = std::move(rt);
        rn = tn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++iters;
    if (!accepted) {
      throw NonConvergence(
          fmt::format("perturbation resolvent stalled (residual {:.3e})", rn), w, rn);
    }
  }
  if (stats != nullptr) {
    stats->solves += 1;
    stats->newton_iters += iters;
  }
  return w;
}

Field step_perturbed(const SchemeSpec& scheme, const SplittingContext& ctx, double h,
                     const Field& u, StepStats* stats) {
  require_positive_step(h);
  if (!scheme.perturbation) {
    throw Error(ErrorCode::invalid_params, "perturbed scheme needs a perturbation");
  }
  const Perturbation& g = *scheme.perturbation;
  const double m = g.lipschitz();
  if (m > 0.0 && h >= 1.0 / m) {
    throw Error(ErrorCode::step_too_large,
                fmt::format("step {} violates h < 1/M = {}", h, 1.0 / m));
  }
  SchemeSpec base = scheme;
  base.kind = scheme.base;
  if (base.kind == SchemeKind::perturbed_modified ||
      base.kind == SchemeKind::perturbed_semi_implicit) {
    throw Error(ErrorCode::invalid_params, "perturbed base step must be sum, lie or backward_euler");
  }
  const Field y = step(base, ctx, h, u, stats);
  if (scheme.kind == SchemeKind::perturbed_semi_implicit) {
    Field out = y;
    out.axpy(h, g.apply(y));
    return out;
  }
  return solve_perturbation_resolvent(g, ctx.pivot(), h, y, ctx.solver(), stats);
}

Field step(const SchemeSpec& scheme, const SplittingContext& ctx, double h, const Field& u,
           StepStats* stats) {
  switch (scheme.kind) {
    case SchemeKind::sum_splitting: return step_sum(ctx, h, u, stats);
    case SchemeKind::lie_splitting: return step_lie(ctx, h, u, scheme.lie_order, stats);
    case SchemeKind::backward_euler: return step_backward_euler(ctx, h, u, stats);
    case SchemeKind::perturbed_modified:
    case SchemeKind::perturbed_semi_implicit: return step_perturbed(scheme, ctx, h, u, stats);
  }
  throw Error(ErrorCode::invalid_params, "unknown scheme kind");
}

Trajectory integrate(const SchemeSpec& scheme, const SplittingContext& ctx, const Field& eta,
                     double t_end, int n, double t_start) {
  if (n < 1) throw Error(ErrorCode::invalid_params, "step count must be at least 1");
  if (!(t_end > t_start)) {
    throw Error(ErrorCode::invalid_params,
                fmt::format("final time {} must exceed start time {}", t_end, t_start));
  }
  if (!scheme.lie_order.empty()) {
    std::vector<int> sorted = scheme.lie_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(static_cast<std::size_t>(ctx.subdomains()));
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) {
      throw Error(ErrorCode::invalid_params, "lie_order must be a permutation of subdomain indices");
    }
  }
  const double h = (t_end - t_start) / n;
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(n) + 1);
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.times.push_back(t_start);
  traj.states.push_back(eta);
  for (int k = 0; k < n; ++k) {
    StepStats st;
    try {
      traj.states.push_back(step(scheme, ctx, h, traj.states.back(), &st));
    } catch (const NonConvergence& e) {
      throw NonConvergence(fmt::format("step {}: {}", k, e.what()), e.best_iterate(),
                           e.residual());
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("step {}: {}", k, e.what()));
    }
    traj.times.push_back(k + 1 == n ? t_end : t_start + (k + 1) * h);
    traj.stats.push_back(st);
  }
  return traj;
}

}  // namespace ddsplit
