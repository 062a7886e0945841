#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ddsplit/config.hpp"

namespace ddsplit {

struct StudyOptions {
  int threads = 1;
  /// When false, wall_ms is reported as 0 so that reports are byte-stable.
  bool record_timing = true;
};

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double error_final = 0.0;  // pivot norm at T
  double error_sup = 0.0;    // max over times shared with the reference
  std::optional<double> observed_order;  // vs the previous row
  double wall_ms = 0.0;
  long newton_total = 0;
  long fallbacks = 0;
};

struct ConvergenceReport {
  std::string name;
  Pivot pivot = Pivot::l2;
  std::string reference;  // "backward_euler(n=...)" or "barenblatt"
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Final states of the finest run and of the reference.
  std::optional<Field> finest_final;
  std::optional<Field> reference_final;
};

/// Runs the configured scheme for every n in cfg.steps and compares it with
/// the reference (backward Euler with n_ref = factor * max(n), or the
/// Barenblatt solution). Orders are log(e_prev / e) / log(n / n_prev).
/// Throws Error{reference_unavailable} if n_ref is not a multiple of every n
/// or the reference run fails; integrator errors propagate.
[[nodiscard]] ConvergenceReport run_convergence_study(const ExperimentConfig& cfg,
                                                      const StudyOptions& options = {});

struct PropagationRow {
  double t = 0.0;
  double radius = 0.0;
  double growth_cells = 0.0;  // radius change since the previous row, in cells
  bool fills_grid = false;    // every interior node above threshold
};

inline constexpr double kSupportThreshold = 1e-8;

/// Radius of {|u| > threshold} around `center` at every recorded time. The
/// first row's growth is measured against `initial_support_radius`.
[[nodiscard]] std::vector<PropagationRow> propagation_probe(
    const Trajectory& trajectory, double initial_support_radius,
    std::array<double, 2> center = {0.0, 0.0}, double threshold = kSupportThreshold);

/// Discrete L1 norm sum_j w_j |u_j|.
[[nodiscard]] double l1_norm(const Field& u);

}  // namespace ddsplit
