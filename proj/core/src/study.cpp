#include "ddsplit/study.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

namespace ddsplit {

namespace {

// Steps from eta and calls visit(k, state) for k = 0..n. Returns the
// accumulated solver statistics.
StepStats march(const SchemeSpec& scheme, const SplittingContext& ctx, const Field& eta, double h,
                int n, const std::function<void(int, const Field&)>& visit) {
  StepStats total;
  Field u = eta;
  visit(0, u);
  for (int k = 0; k < n; ++k) {
    try {
      u = step(scheme, ctx, h, u, &total);
    } catch (const NonConvergence& e) {
      throw NonConvergence(fmt::format("step {}: {}", k, e.what()), e.best_iterate(),
                           e.residual());
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("step {}: {}", k, e.what()));
    }
    visit(k + 1, u);
  }
  return total;
}

SchemeSpec reference_scheme(const SchemeSpec& scheme) {
  SchemeSpec ref;
  ref.kind = SchemeKind::backward_euler;
  if (scheme.kind == SchemeKind::perturbed_modified ||
      scheme.kind == SchemeKind::perturbed_semi_implicit) {
    ref.kind = SchemeKind::perturbed_modified;
    ref.base = SchemeKind::backward_euler;
    ref.perturbation = scheme.perturbation;
  }
  return ref;
}

}  // namespace

ConvergenceReport run_convergence_study(const ExperimentConfig& cfg, const StudyOptions& options) {
  validate(cfg);
  const Grid grid = make_grid(cfg.grid);
  auto pou = make_partition(cfg, grid);
  const SplittingContext ctx(cfg.problem, pou, cfg.solver, options.threads);
  const SchemeSpec scheme = make_scheme(cfg);
  const Field eta = make_initial(cfg, grid);
  const Pivot pivot = ctx.pivot();
  const double span = cfg.t_end - cfg.t_start;

  ConvergenceReport report;
  report.name = cfg.name;
  report.pivot = pivot;
  report.t_start = cfg.t_start;
  report.t_end = cfg.t_end;

  // Reference states at the coarsest common stride.
  std::function<Field(int n, int k)> reference_at;
  std::vector<Field> ref_states;
  int n_ref = 0;
  int stride = 0;
  std::optional<BarenblattParams> bb;
  if (cfg.reference.kind == ReferenceKind::backward_euler) {
    const int finest = cfg.steps.back();
    n_ref = cfg.reference.steps_override > 0 ? cfg.reference.steps_override
                                             : cfg.reference.factor * finest;
    for (const int n : cfg.steps) {
      if (n_ref % n != 0) {
        throw Error(ErrorCode::reference_unavailable,
                    fmt::format("reference step count {} is not a multiple of n = {}", n_ref, n));
      }
      stride = std::gcd(stride, n_ref / n);
    }
    const bool perturbed = scheme.kind == SchemeKind::perturbed_modified ||
                           scheme.kind == SchemeKind::perturbed_semi_implicit;
    report.reference =
        fmt::format("{}backward_euler(n={})", perturbed ? "perturbed_modified/" : "", n_ref);
    try {
      (void)march(reference_scheme(scheme), ctx, eta, span / n_ref, n_ref,
                  [&](int k, const Field& u) {
                    if (k % stride == 0) ref_states.push_back(u);
                  });
    } catch (const Error& e) {
      throw Error(ErrorCode::reference_unavailable,
                  fmt::format("reference run failed: {}", e.what()));
    }
    report.reference_final = ref_states.back();
    reference_at = [&](int n, int k) { return ref_states.at(static_cast<std::size_t>(k * (n_ref / n) / stride)); };
  } else {
    bb = barenblatt_params(cfg);
    report.reference = "barenblatt";
    reference_at = [&](int n, int k) {
      const double t = k == n ? cfg.t_end : cfg.t_start + k * (span / n);
      return barenblatt_field(*bb, grid, t, cfg.initial.center);
    };
    report.reference_final = reference_at(1, 1);
  }

  for (std::size_t i = 0; i < cfg.steps.size(); ++i) {
    const int n = cfg.steps[i];
    ConvergenceRow row;
    row.n = n;
    row.h = span / n;
    std::optional<Field> last;
    const auto start = std::chrono::steady_clock::now();
    const StepStats st = march(scheme, ctx, eta, row.h, n, [&](int k, const Field& u) {
      const double e = pivot_norm(pivot, u - reference_at(n, k));
      row.error_sup = std::max(row.error_sup, e);
      if (k == n) {
        row.error_final = e;
        last = u;
      }
    });
    const auto stop = std::chrono::steady_clock::now();
    if (options.record_timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    }
    row.newton_total = st.newton_iters;
    row.fallbacks = st.fallbacks;
    if (i > 0) {
      const auto& prev = report.rows.back();
      const double order =
          std::log(prev.error_final / row.error_final) / std::log(static_cast<double>(n) / prev.n);
      if (std::isfinite(order)) row.observed_order = order;
    }
    report.rows.push_back(row);
    if (i + 1 == cfg.steps.size()) report.finest_final = std::move(last);
  }
  return report;
}

double l1_norm(const Field& u) {
  const auto w = u.grid().node_weights();
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += w[j] * std::abs(u[j]);
  return s;
}

std::vector<PropagationRow> propagation_probe(const Trajectory& trajectory,
                                              double initial_support_radius,
                                              std::array<double, 2> center, double threshold) {
  std::vector<PropagationRow> rows;
  double prev = initial_support_radius;
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const Field& u = trajectory.states[k];
    const Grid& g = u.grid();
    PropagationRow row;
    row.t = k < trajectory.times.size() ? trajectory.times[k] : 0.0;
    bool fills = g.interior_count() > 0;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      const bool above = std::abs(u[node]) > threshold;
      if (!above && !g.is_boundary(node)) fills = false;
      if (!above) continue;
      const auto x = g.node_coords(node);
      double r2 = 0.0;
      for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
      row.radius = std::max(row.radius, std::sqrt(r2));
    }
    row.fills_grid = fills;
    row.growth_cells = (row.radius - prev) / g.dx(0);
    prev = row.radius;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ddsplit
