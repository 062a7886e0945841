#include "ddsplit/demos.hpp"

#include <fmt/format.h>

namespace ddsplit {

namespace {

// p = 3 on [0, 1], sin(pi x) + 1, two strips.
ExperimentConfig plaplace(SchemeKind kind, const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.grid = {1, {65}, {0.0}, {1.0}};
  c.layout.kind = LayoutKind::strips;
  c.layout.count = 2;
  c.layout.overlap = 0.125;
  c.problem.family = Family::p_laplace_neumann;
  c.problem.spec = {AlphaKind::p_laplace, 3.0, 1.0, 1.0, kDefaultPowerEps};
  c.scheme = kind;
  c.initial.id = "sin_plus_one";
  c.t_start = 0.0;
  c.t_end = 0.25;
  c.steps = {4, 8, 16, 32, 64, 128};
  c.reference = {ReferenceKind::backward_euler, 16, 2048};
  c.output = name + ".csv";
  return c;
}

// Porous medium on [-1.5, 1.5] from t0 = 0.01 to T = 0.11, two strips.
ExperimentConfig porous(double p, const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.grid = {1, {201}, {-1.5}, {1.5}};
  c.layout.kind = LayoutKind::strips;
  c.layout.count = 2;
  c.layout.overlap = 0.15;
  c.problem.family = Family::porous_medium_dirichlet;
  c.problem.spec = {AlphaKind::porous_medium, p, 1.0, 1.0, kDefaultPowerEps};
  c.scheme = SchemeKind::lie_splitting;
  c.t_start = 0.01;
  c.t_end = 0.11;
  c.output = name + ".csv";
  return c;
}

}  // namespace

std::vector<std::string> demo_names() {
  return {"plaplace-lie", "plaplace-sum", "plaplace-perturbed", "barenblatt", "heat-contrast"};
}

ExperimentConfig demo_config(const std::string& name) {
  if (name == "plaplace-lie") return plaplace(SchemeKind::lie_splitting, name);
  if (name == "plaplace-sum") return plaplace(SchemeKind::sum_splitting, name);
  if (name == "plaplace-perturbed") {
    auto c = plaplace(SchemeKind::perturbed_modified, name);
    c.base = SchemeKind::lie_splitting;
    c.perturbation.kind = "linear_decay";
    c.perturbation.rate = 1.0;
    return c;
  }
  if (name == "barenblatt") {
    auto c = porous(3.0, name);
    c.initial.id = "barenblatt";
    c.initial.mass = 1.0;
    c.steps = {128, 256, 512};
    c.reference.kind = ReferenceKind::barenblatt;
    return c;
  }
  if (name == "heat-contrast") {
    // Linear diffusion from a compact bump of the Barenblatt's initial width.
    auto c = porous(2.0, name);
    c.initial.id = "bump";
    c.initial.amplitude = 1.0;
    c.initial.radius = 0.45;
    c.steps = {64, 128};
    c.reference = {ReferenceKind::backward_euler, 16, 0};
    return c;
  }
  throw Error(ErrorCode::config_error, fmt::format("unknown demo '{}'", name));
}

}  // namespace ddsplit
