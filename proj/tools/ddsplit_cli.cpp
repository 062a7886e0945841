// ddsplit command line: run / check / demo.

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "ddsplit/csv.hpp"
#include "ddsplit/demos.hpp"
#include "ddsplit/study.hpp"

namespace fs = std::filesystem;
using namespace ddsplit;

namespace {

struct Common {
  int threads = 1;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  bool no_timing = false;
};

int run_study(ExperimentConfig cfg, const Common& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  const auto report = run_convergence_study(cfg, {opt.threads, !opt.no_timing});
  fs::create_directories(opt.out);
  const fs::path csv = fs::path(opt.out) / fs::path(cfg.output).filename();
  emit_csv(report, csv);
  std::cout << format_summary(report);
  if (report.finest_final && report.reference_final && report.reference == "barenblatt") {
    const Field diff = *report.finest_final - *report.reference_final;
    std::cout << fmt::format("relative L1 error {:.4e}, relative H^-1 error {:.4e}\n",
                             l1_norm(diff) / l1_norm(*report.reference_final),
                             hminus1_norm(diff) / hminus1_norm(*report.reference_final));
  }
  std::cout << "wrote " << csv.string() << "\n";
  return 0;
}

Field random_field(const Grid& g, bool dirichlet, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Field u(g);
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    const double v = dist(rng);
    u[j] = dirichlet && g.is_boundary(j) ? 0.0 : v;
  }
  return u;
}

int run_check(ExperimentConfig cfg, const Common& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  std::cout << fmt::format("config '{}' is valid\n", cfg.name);
  const Grid grid = make_grid(cfg.grid);
  const auto pou = make_partition(cfg, grid);
  const bool dirichlet = cfg.problem.family == Family::porous_medium_dirichlet;
  const auto ops = make_local_operators(cfg.problem, pou);
  std::mt19937_64 rng(cfg.seed);
  bool ok = true;
  auto report = [&](const std::string& what, double value, double limit) {
    const bool pass = value <= limit;
    ok = ok && pass;
    std::cout << fmt::format("{:<4} {:<44} {:.3e} (limit {:.1e})\n", pass ? "ok" : "FAIL", what,
                             value, limit);
  };

  std::cout << fmt::format("{} subdomains, separating condition {}\n", pou->size(),
                           check_separating_condition(pou->subdomains(), grid) ? "holds"
                                                                               : "does not hold");

  double decomp = 0.0;
  for (int k = 0; k < 10; ++k) {
    decomp = std::max(decomp, decomposition_residual(cfg.problem, pou, random_field(grid, dirichlet, rng)));
  }
  report("decomposition residual", decomp, 1e-12);

  const double h = (cfg.t_end - cfg.t_start) / cfg.steps.front();
  for (const auto& op : ops) {
    const std::string label = op.is_full() ? "full" : fmt::format("l={}", op.index());
    double gap = 0.0;
    std::vector<std::pair<Field, Field>> pairs;
    for (int k = 0; k < 20; ++k) {
      Field u = random_field(grid, dirichlet, rng);
      Field v = random_field(grid, dirichlet, rng);
      gap = std::max(gap, dissipativity_gap(op, u, v));
      pairs.emplace_back(std::move(u), std::move(v));
    }
    report(fmt::format("dissipativity gap ({})", label), gap, 1e-10);
    const double ratio = nonexpansivity_audit(op, h, pairs, cfg.solver);
    report(fmt::format("resolvent Lipschitz ratio - 1 ({}, tau={:g})", label, h), ratio - 1.0, 1e-7);
  }

  const auto a3 = check_assumption3(cfg.problem.spec, 10000, 10.0, cfg.seed);
  report("alpha monotonicity violations", static_cast<double>(a3.monotonicity_violations), 0.0);
  for (const auto& f : a3.failures) std::cout << "     " << f << "\n";
  std::cout << (ok ? "all checks passed\n" : "some checks failed\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain decomposition splitting integrators for degenerate parabolic problems"};
  app.require_subcommand(1);
  Common opt;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--no-timing", opt.no_timing, "write wall_ms as 0 for byte-stable CSV");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a convergence study from a config file");
  run->add_option("config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  add_common(run);

  auto* check = app.add_subcommand("check", "validate a config and run property audits");
  check->add_option("config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  add_common(check);

  std::string demo_name;
  bool print_only = false;
  auto* demo = app.add_subcommand("demo", "run a built-in study ('list' shows names)");
  demo->add_option("name", demo_name, "demo name")->required();
  demo->add_flag("--print", print_only, "print the config instead of running it");
  add_common(demo);

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : {run, check, demo}) {
    if (sub->parsed() && sub->count("--seed") > 0) opt.seed = seed;
  }

  try {
    if (run->parsed()) return run_study(load_config(config_path), opt);
    if (check->parsed()) return run_check(load_config(config_path), opt);
    if (demo_name == "list") {
      for (const auto& n : demo_names()) std::cout << n << "\n";
      return 0;
    }
    const auto cfg = demo_config(demo_name);
    if (print_only) {
      std::cout << dump_config(cfg);
      return 0;
    }
    return run_study(cfg, opt);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::config_error || e.code() == ErrorCode::io_error ? 2 : 1;
  }
}
