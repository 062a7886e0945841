#include "ddsplit/resolvent.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ddsplit {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

enum class Linearization { newton, secant };

struct Outcome {
  std::vector<double> values;  // one per unknown
  int newton_iters = 0;
  double residual = 0.0;
  bool used_fallback = false;
  bool converged = false;
};

/// The nonlinear system of one support component.
class ComponentSystem {
 public:
  ComponentSystem(const SubOperator& op, double tau, const Field& g,
                  std::span<const std::size_t> component)
      : op_(op), tau_(tau), g_(g), local_(g.grid().node_count(), -1) {
    const bool dirichlet = op.problem().family == Family::porous_medium_dirichlet;
    for (const auto node : component) {
      if (dirichlet && g.grid().is_boundary(node)) continue;
      local_[node] = static_cast<long>(unknowns_.size());
      unknowns_.push_back(node);
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return unknowns_.size(); }
  [[nodiscard]] std::span<const std::size_t> unknowns() const noexcept { return unknowns_; }

  // Residual u - tau f(u) - g on the unknowns, zero elsewhere.
  [[nodiscard]] Field residual(const Field& u) const {
    const Field fu = apply(op_, u);
    Field r(u.grid());
    for (const auto node : unknowns_) r[node] = u[node] - tau_ * fu[node] - g_[node];
    return r;
  }

  [[nodiscard]] double norm(const Field& r) const { return pivot_norm(op_.pivot(), r); }

  [[nodiscard]] SpMat matrix(const Field& u, Linearization lin) const {
    Triplets trip;
    const auto n = static_cast<Eigen::Index>(unknowns_.size());
    for (Eigen::Index i = 0; i < n; ++i) trip.emplace_back(i, i, 1.0);
    if (op_.problem().family == Family::p_laplace_neumann) {
      flux_terms(u, lin, trip);
    } else {
      laplacian_terms(u, lin, trip);
    }
    SpMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    return m;
  }

 private:
  void flux_terms(const Field& u, Linearization lin, Triplets& trip) const {
    const Grid& g = u.grid();
    const auto& spec = op_.problem().spec;
    const int k = g.dim();
    const auto uk = static_cast<std::size_t>(k);
    std::array<double, 2> z{};
    std::array<double, 4> jac{};
    for (std::size_t f = 0; f < g.face_count(); ++f) {
      const double chi = op_.face_weight(f);
      if (chi == 0.0 || local_[g.face_nodes(f)[0]] < 0) continue;
      for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (const auto& e : g.face_stencil(f, c)) s += e.coef * u[e.node];
        z[c] = s;
      }
      const std::span<const double> zs(z.data(), uk);
      if (lin == Linearization::newton) {
        alpha_jacobian(spec, zs, std::span<double>(jac.data(), uk * uk));
      } else {
        const double c = alpha_secant(spec, zs);
        jac = {c, 0.0, 0.0, 0.0};
        if (k == 2) jac[3] = c;
      }
      const double scale = tau_ * g.face_weight(f) * chi;
      for (int c = 0; c < k; ++c) {
        for (int cp = 0; cp < k; ++cp) {
          const double jv = jac[static_cast<std::size_t>(c * k + cp)];
          if (jv == 0.0) continue;
          for (const auto& row : g.face_stencil(f, c)) {
            const long r = local_[row.node];
            if (r < 0) continue;
            const double rs = scale * jv * row.coef / g.node_weight(row.node);
            for (const auto& col : g.face_stencil(f, cp)) {
              const long cidx = local_[col.node];
              if (cidx < 0) continue;
              trip.emplace_back(r, cidx, rs * col.coef);
            }
          }
        }
      }
    }
  }

  void laplacian_terms(const Field& u, Linearization lin, Triplets& trip) const {
    const Grid& g = u.grid();
    const auto& spec = op_.problem().spec;
    auto slope = [&](std::size_t node) {
      const double chi = op_.node_weight(node);
      if (chi == 0.0) return 0.0;
      const double z = u[node];
      return chi * (lin == Linearization::newton
                        ? alpha_derivative(spec, z)
                        : alpha_secant(spec, std::span<const double>(&z, 1)));
    };
    for (const auto node : unknowns_) {
      const long r = local_[node];
      const auto ij = g.node_ij(node);
      double diag = 0.0;
      for (int a = 0; a < g.dim(); ++a) {
        const double c = 1.0 / (g.dx(a) * g.dx(a));
        diag += 2.0 * c;
        for (int step : {-1, 1}) {
          auto q = ij;
          q[a] += step;
          const auto nb = g.node_index(q[0], q[1]);
          const long col = local_[nb];
          if (col < 0) continue;
          const double sl = slope(nb);
          if (sl != 0.0) trip.emplace_back(r, col, -tau_ * c * sl);
        }
      }
      const double sl = slope(node);
      if (sl != 0.0) trip.emplace_back(r, r, tau_ * diag * sl);
    }
  }

  const SubOperator& op_;
  double tau_;
  const Field& g_;
  std::vector<long> local_;
  std::vector<std::size_t> unknowns_;
};

// Solves m x = -r restricted to the unknowns. Returns false on failure.
bool linear_solve(const SpMat& m, const ComponentSystem& sys, const Field& rhs_field, double sign,
                  Eigen::VectorXd& x) {
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) return false;
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(sys.size()));
  const auto unk = sys.unknowns();
  for (std::size_t i = 0; i < unk.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = sign * rhs_field[unk[i]];
  x = lu.solve(rhs);
  return lu.info() == Eigen::Success && x.allFinite();
}

Outcome solve_component(const SubOperator& op, double tau, const Field& g,
                        std::span<const std::size_t> component, const SolverConfig& cfg,
                        double tol) {
  ComponentSystem sys(op, tau, g, component);
  const auto unk = sys.unknowns();
  Outcome out;
  Field u = g;
  Field r = sys.residual(u);
  double rn = sys.norm(r);
  Field best = u;
  double best_rn = rn;

  auto finish = [&](bool converged) {
    out.converged = converged;
    const Field& src = converged ? u : best;
    out.residual = converged ? rn : best_rn;
    out.values.resize(unk.size());
    for (std::size_t i = 0; i < unk.size(); ++i) out.values[i] = src[unk[i]];
    return out;
  };

  if (sys.size() == 0 || rn <= tol) return finish(true);

  Eigen::VectorXd delta;
  while (out.newton_iters < cfg.max_newton) {
    if (!linear_solve(sys.matrix(u, Linearization::newton), sys, r, -1.0, delta)) break;
    double lambda = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= cfg.max_backtrack; ++bt) {
      Field trial = u;
      for (std::size_t i = 0; i < unk.size(); ++i) {
        trial[unk[i]] += lambda * delta[static_cast<Eigen::Index>(i)];
      }
      Field rt = sys.residual(trial);
      const double tn = sys.norm(rt);
      if (std::isfinite(tn) && tn <= (1.0 - cfg.armijo_c * lambda) * rn) {
        u = std::move(trial);
        r = std::move(rt);
        rn = tn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    ++out.newton_iters;
    if (rn < best_rn) {
      best = u;
      best_rn = rn;
    }
    if (rn <= tol) return finish(true);
  }

  // Damped lagged-coefficient iteration from the best Newton iterate.
  out.used_fallback = true;
  u = best;
  rn = best_rn;
  double omega = 1.0;
  for (int it = 0; it < cfg.fallback_picard; ++it) {
    if (!linear_solve(sys.matrix(u, Linearization::secant), sys, g, 1.0, delta)) break;
    Field trial = u;
    for (std::size_t i = 0; i < unk.size(); ++i) {
      const double target = delta[static_cast<Eigen::Index>(i)];
      trial[unk[i]] += omega * (target - trial[unk[i]]);
    }
    Field rt = sys.residual(trial);
    const double tn = sys.norm(rt);
    if (!std::isfinite(tn) || tn >= rn) {
      omega *= 0.5;
      if (omega < 1e-6) break;
      continue;
    }
    u = std::move(trial);
    rn = tn;
    omega = std::min(1.0, 2.0 * omega);
    if (rn < best_rn) {
      best = u;
      best_rn = rn;
    }
    if (rn <= tol) return finish(true);
  }
  return finish(false);
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol_abs > 0.0) || !(cfg.tol_rel > 0.0) || cfg.max_newton < 1 ||
      cfg.max_backtrack < 1 || !(cfg.armijo_c > 0.0) || !(cfg.armijo_c < 1.0) ||
      cfg.fallback_picard < 1) {
    throw Error(ErrorCode::invalid_params, "solver settings must all be positive");
  }
  if (cfg.tol_abs > 1e-6) {
    throw Error(ErrorCode::invalid_params,
                fmt::format("tol_abs must be <= 1e-6, got {}", cfg.tol_abs));
  }
}

ResolventResult solve_resolvent(const SubOperator& op, double tau, const Field& g,
                                const SolverConfig& cfg, const Executor* exec) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::invalid_step, fmt::format("step must be positive, got {}", tau));
  }
  require_same_grid(op.grid(), g.grid());
  if (!g.all_finite()) throw Error(ErrorCode::invalid_params, "resolvent data is not finite");

  const double tol_total = cfg.tol_abs + cfg.tol_rel * pivot_norm(op.pivot(), g);
  const auto& comps = op.components();
  const double tol = tol_total / static_cast<double>(std::max<std::size_t>(1, comps.size()));

  std::vector<Outcome> outcomes(comps.size());
  auto task = [&](std::size_t c) { outcomes[c] = solve_component(op, tau, g, comps[c], cfg, tol); };
  if (exec != nullptr) {
    exec->parallel_for(comps.size(), task);
  } else {
    for (std::size_t c = 0; c < comps.size(); ++c) task(c);
  }

  ResolventResult res{g, 0, 0.0, false};
  bool ok = true;
  double worst = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const ComponentSystem sys(op, tau, g, comps[c]);
    const auto unk = sys.unknowns();
    for (std::size_t i = 0; i < unk.size(); ++i) res.u[unk[i]] = outcomes[c].values[i];
    res.newton_iters += outcomes[c].newton_iters;
    res.used_fallback = res.used_fallback || outcomes[c].used_fallback;
    ok = ok && outcomes[c].converged;
    worst = std::max(worst, outcomes[c].residual);
  }
  Field r = res.u;
  r.axpy(-tau, apply(op, res.u));
  r -= g;
  res.residual = pivot_norm(op.pivot(), r);
  if (!ok) {
    throw NonConvergence(
        fmt::format("resolvent of operator {} with tau = {} did not converge (residual {:.3e}, "
                    "tolerance {:.3e})",
                    op.index(), tau, worst, tol),
        res.u, res.residual);
  }
  return res;
}

double nonexpansivity_audit(const SubOperator& op, double tau,
                            std::span<const std::pair<Field, Field>> pairs,
                            const SolverConfig& cfg) {
  double worst = 0.0;
  for (const auto& [u, v] : pairs) {
    const double d = pivot_norm(op.pivot(), u - v);
    if (d == 0.0) continue;
    const Field ru = solve_resolvent(op, tau, u, cfg).u;
    const Field rv = solve_resolvent(op, tau, v, cfg).u;
    worst = std::max(worst, pivot_norm(op.pivot(), ru - rv) / d);
  }
  return worst;
}

std::vector<YosidaRow> yosida_consistency(std::span<const SubOperator> ops, const Field& u,
                                          std::span<const double> taus, const SolverConfig& cfg) {
  if (ops.empty()) return {};
  const SubOperator full = SubOperator::full(ops.front().problem(), ops.front().grid());
  const Field fu = apply(full, u);
  const double s = static_cast<double>(ops.size());
  std::vector<YosidaRow> rows;
  for (const double tau : taus) {
    Field sum(u.grid());
    for (const auto& op : ops) sum += apply(op, solve_resolvent(op, tau * s, u, cfg).u);
    rows.push_back({tau, pivot_norm(full.pivot(), sum - fu)});
  }
  return rows;
}

}  // namespace ddsplit
