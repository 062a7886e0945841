#include "ddsplit/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ddsplit {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config_error, msg); }

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error(fmt::format("'{}' must be an object", where));
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) config_error(fmt::format("unknown key '{}.{}'", where, key));
  }
}

template <class T>
T get_or(const json& obj, const std::string& where, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(fmt::format("bad value for '{}.{}': {}", where, key, e.what()));
  }
}

LayoutKind layout_kind_from_string(const std::string& s) {
  if (s == "strips") return LayoutKind::strips;
  if (s == "blocks") return LayoutKind::blocks;
  if (s == "separating") return LayoutKind::separating;
  config_error(fmt::format("unknown layout kind '{}'", s));
}

std::string to_string(LayoutKind k) {
  switch (k) {
    case LayoutKind::strips: return "strips";
    case LayoutKind::blocks: return "blocks";
    case LayoutKind::separating: return "separating";
  }
  return "strips";
}

const std::set<std::string>& initial_ids() {
  static const std::set<std::string> ids{"sin_plus_one", "bump", "barenblatt",
                                         "constant",     "zero", "random"};
  return ids;
}

// Wraps library errors from the typed parsers into config errors.
template <class F>
auto as_config(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_error) throw;
    config_error(fmt::format("{}: {}", where, e.what()));
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    config_error(fmt::format("config is not valid JSON: {}", e.what()));
  }
  check_keys(root, "config",
             {"name", "grid", "layout", "problem", "scheme", "initial", "t_start", "T", "steps",
              "reference", "solver", "output", "seed"});
  ExperimentConfig cfg;
  cfg.name = get_or<std::string>(root, "config", "name", cfg.name);

  if (!root.contains("grid")) config_error("missing section 'grid'");
  const json& g = root["grid"];
  check_keys(g, "grid", {"dim", "n", "lo", "hi"});
  cfg.grid.dim = get_or<int>(g, "grid", "dim", 1);
  const auto d = static_cast<std::size_t>(std::max(cfg.grid.dim, 1));
  cfg.grid.n = get_or<std::vector<int>>(g, "grid", "n", std::vector<int>(d, 65));
  cfg.grid.lo = get_or<std::vector<double>>(g, "grid", "lo", std::vector<double>(d, 0.0));
  cfg.grid.hi = get_or<std::vector<double>>(g, "grid", "hi", std::vector<double>(d, 1.0));

  if (root.contains("layout")) {
    const json& l = root["layout"];
    check_keys(l, "layout", {"kind", "count", "blocks", "overlap", "frame_width"});
    cfg.layout.kind = layout_kind_from_string(get_or<std::string>(l, "layout", "kind", "strips"));
    cfg.layout.count = get_or<int>(l, "layout", "count", 1);
    const auto blocks = get_or<std::vector<int>>(l, "layout", "blocks", {1, 1});
    if (blocks.size() != 2) config_error("'layout.blocks' must have two entries");
    cfg.layout.blocks = {blocks[0], blocks[1]};
    cfg.layout.overlap = get_or<double>(l, "layout", "overlap", 0.0);
    cfg.layout.frame_width = get_or<double>(l, "layout", "frame_width", 0.0);
  }

  if (!root.contains("problem")) config_error("missing section 'problem'");
  const json& p = root["problem"];
  check_keys(p, "problem", {"family", "alpha"});
  cfg.problem.family = as_config("problem.family", [&] {
    return family_from_string(get_or<std::string>(p, "problem", "family", "p_laplace_neumann"));
  });
  if (p.contains("alpha")) {
    const json& a = p["alpha"];
    check_keys(a, "problem.alpha", {"kind", "p", "a", "b", "eps_reg"});
    auto& spec = cfg.problem.spec;
    spec.kind = as_config("problem.alpha.kind", [&] {
      return alpha_kind_from_string(get_or<std::string>(a, "problem.alpha", "kind", "p_laplace"));
    });
    spec.p = get_or<double>(a, "problem.alpha", "p", 2.0);
    spec.a = get_or<double>(a, "problem.alpha", "a", 1.0);
    spec.b = get_or<double>(a, "problem.alpha", "b", 1.0);
    spec.eps_reg = get_or<double>(
        a, "problem.alpha", "eps_reg",
        spec.kind == AlphaKind::stefan ? kDefaultStefanEps : kDefaultPowerEps);
  }

  if (root.contains("scheme")) {
    const json& s = root["scheme"];
    check_keys(s, "scheme", {"kind", "base", "lie_order", "perturbation"});
    cfg.scheme = as_config("scheme.kind", [&] {
      return scheme_kind_from_string(get_or<std::string>(s, "scheme", "kind", "lie"));
    });
    cfg.base = as_config("scheme.base", [&] {
      return scheme_kind_from_string(get_or<std::string>(s, "scheme", "base", "lie"));
    });
    cfg.lie_order = get_or<std::vector<int>>(s, "scheme", "lie_order", {});
    if (s.contains("perturbation")) {
      const json& q = s["perturbation"];
      check_keys(q, "scheme.perturbation", {"kind", "rate", "lo", "hi"});
      cfg.perturbation.kind = get_or<std::string>(q, "scheme.perturbation", "kind", "");
      cfg.perturbation.rate = get_or<double>(q, "scheme.perturbation", "rate", 1.0);
      cfg.perturbation.lo = get_or<double>(q, "scheme.perturbation", "lo", -1.0);
      cfg.perturbation.hi = get_or<double>(q, "scheme.perturbation", "hi", 2.0);
    }
  }

  if (root.contains("initial")) {
    const json& i = root["initial"];
    check_keys(i, "initial", {"id", "amplitude", "radius", "value", "center", "mass"});
    auto& init = cfg.initial;
    init.id = get_or<std::string>(i, "initial", "id", init.id);
    init.amplitude = get_or<double>(i, "initial", "amplitude", init.amplitude);
    init.radius = get_or<double>(i, "initial", "radius", init.radius);
    init.value = get_or<double>(i, "initial", "value", init.value);
    init.mass = get_or<double>(i, "initial", "mass", init.mass);
    const auto c = get_or<std::vector<double>>(i, "initial", "center", {0.0, 0.0});
    if (c.empty() || c.size() > 2) config_error("'initial.center' must have one or two entries");
    init.center = {c[0], c.size() > 1 ? c[1] : 0.0};
  }

  cfg.t_start = get_or<double>(root, "config", "t_start", 0.0);
  cfg.t_end = get_or<double>(root, "config", "T", 1.0);
  cfg.steps = get_or<std::vector<int>>(root, "config", "steps", cfg.steps);

  if (root.contains("reference")) {
    const json& r = root["reference"];
    check_keys(r, "reference", {"kind", "factor", "steps"});
    const auto kind = get_or<std::string>(r, "reference", "kind", "backward_euler");
    if (kind == "backward_euler") {
      cfg.reference.kind = ReferenceKind::backward_euler;
    } else if (kind == "barenblatt") {
      cfg.reference.kind = ReferenceKind::barenblatt;
    } else {
      config_error(fmt::format("unknown reference kind '{}'", kind));
    }
    cfg.reference.factor = get_or<int>(r, "reference", "factor", 16);
    cfg.reference.steps_override = get_or<int>(r, "reference", "steps", 0);
  }

  if (root.contains("solver")) {
    const json& s = root["solver"];
    check_keys(s, "solver",
               {"tol_abs", "tol_rel", "max_newton", "max_backtrack", "armijo_c", "fallback_picard"});
    auto& sc = cfg.solver;
    sc.tol_abs = get_or<double>(s, "solver", "tol_abs", sc.tol_abs);
    sc.tol_rel = get_or<double>(s, "solver", "tol_rel", sc.tol_rel);
    sc.max_newton = get_or<int>(s, "solver", "max_newton", sc.max_newton);
    sc.max_backtrack = get_or<int>(s, "solver", "max_backtrack", sc.max_backtrack);
    sc.armijo_c = get_or<double>(s, "solver", "armijo_c", sc.armijo_c);
    sc.fallback_picard = get_or<int>(s, "solver", "fallback_picard", sc.fallback_picard);
  }

  cfg.output = get_or<std::string>(root, "config", "output", cfg.name + ".csv");
  cfg.seed = get_or<std::uint64_t>(root, "config", "seed", 1);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  json root;
  root["name"] = cfg.name;
  root["grid"] = {{"dim", cfg.grid.dim}, {"n", cfg.grid.n}, {"lo", cfg.grid.lo}, {"hi", cfg.grid.hi}};
  root["layout"] = {{"kind", to_string(cfg.layout.kind)},
                    {"count", cfg.layout.count},
                    {"blocks", cfg.layout.blocks},
                    {"overlap", cfg.layout.overlap},
                    {"frame_width", cfg.layout.frame_width}};
  const auto& a = cfg.problem.spec;
  root["problem"] = {{"family", to_string(cfg.problem.family)},
                     {"alpha",
                      {{"kind", to_string(a.kind)},
                       {"p", a.p},
                       {"a", a.a},
                       {"b", a.b},
                       {"eps_reg", a.eps_reg}}}};
  json scheme = {{"kind", to_string(cfg.scheme)}, {"base", to_string(cfg.base)}};
  if (!cfg.lie_order.empty()) scheme["lie_order"] = cfg.lie_order;
  if (!cfg.perturbation.kind.empty()) {
    scheme["perturbation"] = {{"kind", cfg.perturbation.kind},
                              {"rate", cfg.perturbation.rate},
                              {"lo", cfg.perturbation.lo},
                              {"hi", cfg.perturbation.hi}};
  }
  root["scheme"] = scheme;
  const auto& i = cfg.initial;
  root["initial"] = {{"id", i.id},
                     {"amplitude", i.amplitude},
                     {"radius", i.radius},
                     {"value", i.value},
                     {"center", std::vector<double>(i.center.begin(),
                                                    i.center.begin() + cfg.grid.dim)},
                     {"mass", i.mass}};
  root["t_start"] = cfg.t_start;
  root["T"] = cfg.t_end;
  root["steps"] = cfg.steps;
  json ref = {{"kind", cfg.reference.kind == ReferenceKind::barenblatt ? "barenblatt"
                                                                        : "backward_euler"},
              {"factor", cfg.reference.factor}};
  if (cfg.reference.steps_override > 0) ref["steps"] = cfg.reference.steps_override;
  root["reference"] = ref;
  const auto& s = cfg.solver;
  root["solver"] = {{"tol_abs", s.tol_abs},         {"tol_rel", s.tol_rel},
                    {"max_newton", s.max_newton},   {"max_backtrack", s.max_backtrack},
                    {"armijo_c", s.armijo_c},       {"fallback_picard", s.fallback_picard}};
  root["output"] = cfg.output;
  root["seed"] = cfg.seed;
  return root.dump(2) + "\n";
}

void validate(const ExperimentConfig& cfg) {
  const auto& g = cfg.grid;
  const auto d = static_cast<std::size_t>(g.dim);
  if (g.dim < 1 || g.dim > 2) config_error(fmt::format("grid.dim must be 1 or 2, got {}", g.dim));
  if (g.n.size() != d || g.lo.size() != d || g.hi.size() != d) {
    config_error("grid.n, grid.lo and grid.hi need one entry per dimension");
  }
  if (cfg.steps.empty()) config_error("steps must not be empty");
  for (std::size_t k = 0; k < cfg.steps.size(); ++k) {
    if (cfg.steps[k] < 1) config_error("steps must be positive");
    if (k > 0 && cfg.steps[k] <= cfg.steps[k - 1]) config_error("steps must be strictly increasing");
  }
  if (!std::isfinite(cfg.t_start) || !std::isfinite(cfg.t_end) || !(cfg.t_end > cfg.t_start)) {
    config_error(fmt::format("need T > t_start (got t_start = {}, T = {})", cfg.t_start, cfg.t_end));
  }
  if (!initial_ids().contains(cfg.initial.id)) {
    config_error(fmt::format("unknown initial id '{}'", cfg.initial.id));
  }
  const bool pme = cfg.problem.family == Family::porous_medium_dirichlet;
  if (cfg.initial.id == "barenblatt") {
    if (!pme || cfg.problem.spec.kind != AlphaKind::porous_medium || !(cfg.problem.spec.p > 2.0)) {
      config_error("initial 'barenblatt' needs the porous medium family with p > 2");
    }
    if (!(cfg.t_start > 0.0)) config_error("initial 'barenblatt' needs t_start > 0");
  }
  if (cfg.reference.kind == ReferenceKind::barenblatt && cfg.initial.id != "barenblatt") {
    config_error("reference 'barenblatt' needs initial id 'barenblatt'");
  }
  if (cfg.reference.kind == ReferenceKind::backward_euler) {
    if (cfg.reference.factor < 1) config_error("reference.factor must be at least 1");
    if (cfg.reference.steps_override < 0) config_error("reference.steps must be positive");
  }
  const bool perturbed = cfg.scheme == SchemeKind::perturbed_modified ||
                         cfg.scheme == SchemeKind::perturbed_semi_implicit;
  if (perturbed) {
    if (cfg.perturbation.kind.empty()) config_error("perturbed scheme needs scheme.perturbation");
    if (cfg.base == SchemeKind::perturbed_modified ||
        cfg.base == SchemeKind::perturbed_semi_implicit) {
      config_error("scheme.base must be sum, lie or backward_euler");
    }
  }
  as_config("problem", [&] {
    validate(cfg.problem, g.dim);
    return 0;
  });
  as_config("solver", [&] {
    validate(cfg.solver);
    return 0;
  });
  if (!cfg.perturbation.kind.empty()) (void)make_perturbation(cfg.perturbation);
  if (cfg.lie_order.size() > 0) {
    std::vector<int> sorted = cfg.lie_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted[k] != static_cast<int>(k)) {
        config_error("scheme.lie_order must be a permutation of 0..s-1");
      }
    }
  }
}

Grid make_grid(const GridSpec& spec) {
  return as_config("grid", [&] { return build_grid(spec.dim, spec.n, spec.lo, spec.hi); });
}

std::shared_ptr<const PartitionOfUnity> make_partition(const ExperimentConfig& cfg,
                                                       const Grid& grid) {
  return as_config("layout", [&] {
    DecompositionLayout layout = cfg.layout;
    // A single subdomain needs no overlap; give it a nominal one so the
    // layout builder accepts it.
    const bool single = (layout.kind != LayoutKind::blocks && layout.count == 1) ||
                        (layout.kind == LayoutKind::blocks && layout.blocks[0] * layout.blocks[1] == 1);
    if (single && !(layout.overlap > 0.0)) layout.overlap = 2.0 * grid.dx(0);
    auto subs = build_decomposition(grid, layout);
    double width = layout.overlap;
    return std::make_shared<const PartitionOfUnity>(
        build_partition_of_unity(grid, std::move(subs), width));
  });
}

std::shared_ptr<const Perturbation> make_perturbation(const PerturbationSpec& spec) {
  if (spec.kind.empty()) return nullptr;
  if (spec.kind == "linear_decay") return std::make_shared<LinearDecay>(spec.rate);
  if (spec.kind == "logistic") {
    return as_config("scheme.perturbation", [&] {
      return std::shared_ptr<const Perturbation>(
          std::make_shared<LogisticReaction>(spec.rate, spec.lo, spec.hi));
    });
  }
  config_error(fmt::format("unknown perturbation kind '{}'", spec.kind));
}

SchemeSpec make_scheme(const ExperimentConfig& cfg) {
  SchemeSpec s;
  s.kind = cfg.scheme;
  s.base = cfg.base;
  s.lie_order = cfg.lie_order;
  s.perturbation = make_perturbation(cfg.perturbation);
  return s;
}

BarenblattParams barenblatt_params(const ExperimentConfig& cfg) {
  const int d = cfg.grid.dim;
  const double m = cfg.problem.spec.p - 1.0;
  return {d, m, barenblatt_constant_for_mass(d, m, cfg.initial.mass), cfg.t_start};
}

Field make_initial(const ExperimentConfig& cfg, const Grid& grid) {
  const auto& init = cfg.initial;
  const bool dirichlet = cfg.problem.family == Family::porous_medium_dirichlet;
  Field u(grid);
  if (init.id == "barenblatt") {
    u = barenblatt_field(barenblatt_params(cfg), grid, cfg.t_start, init.center);
  } else if (init.id == "random") {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-init.amplitude, init.amplitude);
    for (std::size_t node = 0; node < grid.node_count(); ++node) u[node] = dist(rng);
  } else {
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      const auto x = grid.node_coords(node);
      double v = 0.0;
      if (init.id == "sin_plus_one") {
        v = 1.0;
        for (int a = 0; a < grid.dim(); ++a) v *= std::sin(std::numbers::pi * x[a]);
        v += 1.0;
      } else if (init.id == "bump") {
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - init.center[a]) * (x[a] - init.center[a]);
        const double s = std::max(1.0 - r2 / (init.radius * init.radius), 0.0);
        v = init.amplitude * s * s;
      } else if (init.id == "constant") {
        v = init.value;
      }
      u[node] = v;
    }
  }
  if (dirichlet) {
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      if (grid.is_boundary(node)) u[node] = 0.0;
    }
  }
  return u;
}

}  // namespace ddsplit
