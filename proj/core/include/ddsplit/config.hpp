#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "ddsplit/barenblatt.hpp"
#include "ddsplit/decomposition.hpp"
#include "ddsplit/integrators.hpp"
#include "ddsplit/operators.hpp"
#include "ddsplit/resolvent.hpp"

namespace ddsplit {

struct GridSpec {
  int dim = 1;
  std::vector<int> n{65};
  std::vector<double> lo{0.0};
  std::vector<double> hi{1.0};
};

struct PerturbationSpec {
  std::string kind;  // "", "linear_decay" or "logistic"
  double rate = 1.0;
  double lo = -1.0;  // logistic clamp range
  double hi = 2.0;
};

/// Initial datum ids:
///   sin_plus_one  prod_a sin(pi x_a) + 1
///   bump          amplitude * max(1 - |x - center|^2 / radius^2, 0)^2
///   barenblatt    Barenblatt profile at t_start (PME family only)
///   constant      value everywhere
///   zero
///   random        uniform in [-amplitude, amplitude] from the seed, zero
///                 on the hull for the Dirichlet family
struct InitialSpec {
  std::string id = "sin_plus_one";
  double amplitude = 1.0;
  double radius = 0.5;
  double value = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  double mass = 1.0;  // barenblatt
};

enum class ReferenceKind { backward_euler, barenblatt };

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::backward_euler;
  int factor = 16;  // n_ref = factor * max(steps) unless steps_override > 0
  int steps_override = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  GridSpec grid;
  DecompositionLayout layout;
  ProblemKind problem;
  SchemeKind scheme = SchemeKind::lie_splitting;
  SchemeKind base = SchemeKind::lie_splitting;
  std::vector<int> lie_order;
  PerturbationSpec perturbation;
  InitialSpec initial;
  double t_start = 0.0;
  double t_end = 1.0;
  std::vector<int> steps{4, 8, 16};
  ReferenceSpec reference;
  SolverConfig solver;
  std::string output = "results.csv";
  std::uint64_t seed = 1;
};

/// Parses the JSON experiment format and validates it. Throws
/// Error{config_error} with the offending key in the message.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text);

/// Reads and parses a config file. Throws Error{io_error} if unreadable.
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

/// Serializes back to the JSON format (pretty printed).
[[nodiscard]] std::string dump_config(const ExperimentConfig& cfg);

/// Checks step counts (positive, strictly increasing), times, ids and the
/// problem/grid/layout/solver settings. Throws Error{config_error}.
void validate(const ExperimentConfig& cfg);

[[nodiscard]] Grid make_grid(const GridSpec& spec);
[[nodiscard]] std::shared_ptr<const PartitionOfUnity> make_partition(const ExperimentConfig& cfg,
                                                                     const Grid& grid);
[[nodiscard]] std::shared_ptr<const Perturbation> make_perturbation(const PerturbationSpec& spec);
[[nodiscard]] SchemeSpec make_scheme(const ExperimentConfig& cfg);
[[nodiscard]] Field make_initial(const ExperimentConfig& cfg, const Grid& grid);

/// Barenblatt parameters implied by a PME config with the barenblatt datum.
[[nodiscard]] BarenblattParams barenblatt_params(const ExperimentConfig& cfg);

}  // namespace ddsplit
