#include "ddsplit/decomposition.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace ddsplit {

namespace {

struct Interval {
  int start;
  int end;
};

[[noreturn]] void infeasible(const std::string& why) {
  throw Error(ErrorCode::infeasible_layout, why);
}

int overlap_cells(const Grid& grid, int axis, double overlap) {
  const auto m = static_cast<int>(std::lround(overlap / grid.dx(axis)));
  if (!(overlap > 0.0) || m < 2) {
    infeasible(fmt::format("overlap {} is below two cells on axis {} (dx = {})", overlap, axis,
                           grid.dx(axis)));
  }
  return m;
}

// Splits the index range [a, b] into `pieces` intervals with `m` cells of
// overlap around each equally spaced cut point.
std::vector<Interval> split_axis(const Grid& grid, int axis, int a, int b, int pieces, int m) {
  if (pieces < 1) infeasible("subdomain count must be positive");
  std::vector<Interval> out;
  int start = a;
  const double len = static_cast<double>(b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    int end = b;
    if (k + 1 < pieces) {
      const double cut = a + len * (k + 1);
      end = static_cast<int>(std::lround(cut + 0.5 * m));
    }
    out.push_back({start, end});
    start = end - m;
  }
  const int last = grid.n(axis) - 1;
  for (const auto& iv : out) {
    const int rise_end = iv.start == 0 ? iv.start : iv.start + m;
    const int fall_start = iv.end == last ? iv.end : iv.end - m;
    if (iv.start < 0 || iv.end > last || iv.start >= iv.end || fall_start < rise_end) {
      infeasible(fmt::format("{} pieces with {} cells of overlap do not fit on axis {} ({} nodes)",
                             pieces, m, axis, grid.n(axis)));
    }
  }
  return out;
}

Subdomain box_subdomain(const Grid& grid, int id, IndexBox box) {
  Subdomain s;
  s.id = id;
  s.shape = SubdomainShape::box;
  s.components.push_back(box);
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    if (box.contains(grid.node_ij(node), grid.dim())) s.node_set.push_back(node);
  }
  return s;
}

Subdomain frame_subdomain(const Grid& grid, int id, IndexBox hole) {
  Subdomain s;
  s.id = id;
  s.shape = SubdomainShape::frame;
  s.hole = hole;
  const int nx = grid.n(0) - 1;
  if (grid.dim() == 1) {
    s.components.push_back({{0, 0}, {hole.lo[0], 0}});
    s.components.push_back({{hole.hi[0], 0}, {nx, 0}});
  } else {
    const int ny = grid.n(1) - 1;
    s.components.push_back({{0, 0}, {nx, hole.lo[1]}});
    s.components.push_back({{0, hole.hi[1]}, {nx, ny}});
    s.components.push_back({{0, hole.lo[1] + 1}, {hole.lo[0], hole.hi[1] - 1}});
    s.components.push_back({{hole.hi[0], hole.lo[1] + 1}, {nx, hole.hi[1] - 1}});
  }
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto ij = grid.node_ij(node);
    bool inside_open_hole = true;
    for (int a = 0; a < grid.dim(); ++a) {
      if (ij[a] <= hole.lo[a] || ij[a] >= hole.hi[a]) inside_open_hole = false;
    }
    if (!inside_open_hole) s.node_set.push_back(node);
  }
  return s;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Ramp of one box side pair along an axis, evaluated at index coordinate x.
double box_ramp(double x, int start, int end, int last, int m) {
  if (x < start || x > end) return 0.0;
  const double rise = start == 0 ? 1.0 : clamp01((x - start) / m);
  const double fall = end == last ? 1.0 : clamp01((end - x) / m);
  return std::min(rise, fall);
}

double raw_weight(const Grid& grid, const Subdomain& s, std::array<double, 2> x,
                  std::array<int, 2> m) {
  double prod = 1.0;
  if (s.shape == SubdomainShape::box) {
    const auto& b = s.components.front();
    for (int a = 0; a < grid.dim(); ++a) {
      prod *= box_ramp(x[a], b.lo[a], b.hi[a], grid.n(a) - 1, m[a]);
    }
    return prod;
  }
  for (int a = 0; a < grid.dim(); ++a) {
    const double lo = s.hole.lo[a] - m[a];
    const double hi = s.hole.hi[a] + m[a];
    prod *= clamp01(std::min((x[a] - lo) / m[a], (hi - x[a]) / m[a]));
  }
  return 1.0 - prod;
}

}  // namespace

std::vector<Subdomain> build_decomposition(const Grid& grid, const DecompositionLayout& layout) {
  const int d = grid.dim();
  std::array<int, 2> m{0, 0};
  std::vector<Subdomain> out;
  const int nx = grid.n(0) - 1;
  const int ny = d == 2 ? grid.n(1) - 1 : 0;

  switch (layout.kind) {
    case LayoutKind::strips: {
      if (layout.count < 1) infeasible("subdomain count must be positive");
      if (layout.count == 1) {
        out.push_back(box_subdomain(grid, 0, {{0, 0}, {nx, ny}}));
        break;
      }
      m[0] = overlap_cells(grid, 0, layout.overlap);
      const auto pieces = split_axis(grid, 0, 0, nx, layout.count, m[0]);
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        out.push_back(box_subdomain(grid, static_cast<int>(k),
                                    {{pieces[k].start, 0}, {pieces[k].end, ny}}));
      }
      break;
    }
    case LayoutKind::blocks: {
      const int bx = layout.blocks[0];
      const int by = d == 2 ? layout.blocks[1] : 1;
      if (bx < 1 || by < 1) infeasible("block counts must be positive");
      if (d == 1 && layout.blocks[1] > 1) infeasible("1D grids take blocks along axis 0 only");
      std::vector<Interval> px{{0, nx}};
      std::vector<Interval> py{{0, ny}};
      if (bx > 1) {
        m[0] = overlap_cells(grid, 0, layout.overlap);
        px = split_axis(grid, 0, 0, nx, bx, m[0]);
      }
      if (by > 1) {
        m[1] = overlap_cells(grid, 1, layout.overlap);
        py = split_axis(grid, 1, 0, ny, by, m[1]);
      }
      for (int j = 0; j < by; ++j) {
        for (int i = 0; i < bx; ++i) {
          out.push_back(box_subdomain(grid, i + bx * j,
                                      {{px[i].start, py[j].start}, {px[i].end, py[j].end}}));
        }
      }
      break;
    }
    case LayoutKind::separating: {
      if (layout.count < 2) infeasible("a separating layout needs at least two subdomains");
      IndexBox hole;
      IndexBox widened;
      for (int a = 0; a < d; ++a) {
        m[a] = overlap_cells(grid, a, layout.overlap);
        const double fw =
            layout.frame_width > 0.0 ? layout.frame_width : 0.25 * (grid.hi(a) - grid.lo(a));
        const int last = grid.n(a) - 1;
        hole.lo[a] = static_cast<int>(std::lround(fw / grid.dx(a)));
        hole.hi[a] = last - hole.lo[a];
        widened.lo[a] = hole.lo[a] - m[a];
        widened.hi[a] = hole.hi[a] + m[a];
        if (hole.hi[a] <= hole.lo[a] || widened.lo[a] < 1 || widened.hi[a] > last - 1) {
          infeasible(fmt::format(
              "frame width {} with {} overlap cells leaves no room on axis {}", fw, m[a], a));
        }
      }
      const auto pieces =
          split_axis(grid, 0, widened.lo[0], widened.hi[0], layout.count - 1, m[0]);
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        out.push_back(box_subdomain(grid, static_cast<int>(k),
                                    {{pieces[k].start, widened.lo[1]}, {pieces[k].end, widened.hi[1]}}));
      }
      out.push_back(frame_subdomain(grid, layout.count - 1, hole));
      break;
    }
  }
  return out;
}

PartitionOfUnity::PartitionOfUnity(Grid grid, std::vector<Subdomain> subdomains,
                                   std::vector<std::vector<double>> node_weights,
                                   std::vector<std::vector<double>> face_weights,
                                   double overlap_width)
    : grid_(std::move(grid)),
      subdomains_(std::move(subdomains)),
      node_w_(std::move(node_weights)),
      face_w_(std::move(face_weights)),
      overlap_width_(overlap_width) {
  support_.resize(node_w_.size());
  for (std::size_t l = 0; l < node_w_.size(); ++l) {
    for (std::size_t node = 0; node < node_w_[l].size(); ++node) {
      if (node_w_[l][node] > 0.0) support_[l].push_back(node);
    }
  }
}

PartitionOfUnity build_partition_of_unity(const Grid& grid, std::vector<Subdomain> subdomains,
                                          double overlap_width) {
  const auto s = subdomains.size();
  if (s == 0) throw Error(ErrorCode::uncovered_node, "no subdomains");
  std::array<int, 2> m{1, 1};
  double snapped = 0.0;
  if (s > 1) {
    snapped = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.dim(); ++a) {
      m[a] = overlap_cells(grid, a, overlap_width);
      snapped = std::min(snapped, m[a] * grid.dx(a));
    }
  }

  auto evaluate = [&](std::array<double, 2> x, std::vector<std::vector<double>>& w,
                      std::size_t slot, const char* what) {
    double total = 0.0;
    for (std::size_t l = 0; l < s; ++l) {
      w[l][slot] = raw_weight(grid, subdomains[l], x, m);
      total += w[l][slot];
    }
    if (!(total > 0.0)) {
      throw Error(ErrorCode::uncovered_node, fmt::format("{} {} is not covered", what, slot));
    }
    for (std::size_t l = 0; l < s; ++l) w[l][slot] /= total;
  };

  std::vector<std::vector<double>> node_w(s, std::vector<double>(grid.node_count()));
  std::vector<std::vector<double>> face_w(s, std::vector<double>(grid.face_count()));
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto ij = grid.node_ij(node);
    evaluate({static_cast<double>(ij[0]), static_cast<double>(ij[1])}, node_w, node, "node");
  }
  for (std::size_t f = 0; f < grid.face_count(); ++f) {
    const auto ij = grid.node_ij(grid.face_nodes(f)[0]);
    std::array<double, 2> x{static_cast<double>(ij[0]), static_cast<double>(ij[1])};
    x[grid.face_axis(f)] += 0.5;
    evaluate(x, face_w, f, "face");
  }
  return {grid, std::move(subdomains), std::move(node_w), std::move(face_w), snapped};
}

bool check_separating_condition(std::span<const Subdomain> subdomains, const Grid& grid) {
  if (subdomains.size() < 2) return false;
  for (std::size_t l = 0; l + 1 < subdomains.size(); ++l) {
    for (const auto node : subdomains[l].node_set) {
      if (grid.is_boundary(node)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> support_closure(const PartitionOfUnity& pou, int l) {
  const Grid& g = pou.grid();
  std::vector<char> seed(g.node_count(), 0);
  const auto nw = pou.node_weights(l);
  const auto fw = pou.face_weights(l);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (nw[node] > 0.0) seed[node] = 1;
  }
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    if (fw[f] > 0.0) {
      for (const auto node : g.face_nodes(f)) seed[node] = 1;
    }
  }
  std::vector<char> grown = seed;
  const int dy = g.dim() == 2 ? 1 : 0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (!seed[node]) continue;
    const auto ij = g.node_ij(node);
    for (int oj = -dy; oj <= dy; ++oj) {
      for (int oi = -1; oi <= 1; ++oi) {
        const int i = ij[0] + oi;
        const int j = ij[1] + oj;
        if (i < 0 || i >= g.n(0) || j < 0 || (g.dim() == 2 && j >= g.n(1))) continue;
        grown[g.node_index(i, j)] = 1;
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (grown[node]) out.push_back(node);
  }
  return out;
}

std::vector<std::vector<std::size_t>> connected_components(const Grid& grid,
                                                           std::span<const std::size_t> nodes) {
  std::vector<char> member(grid.node_count(), 0);
  std::vector<char> seen(grid.node_count(), 0);
  for (const auto node : nodes) member[node] = 1;
  std::vector<std::vector<std::size_t>> out;
  std::deque<std::size_t> queue;
  for (const auto root : nodes) {
    if (seen[root]) continue;
    std::vector<std::size_t> comp;
    seen[root] = 1;
    queue.push_back(root);
    while (!queue.empty()) {
      const auto node = queue.front();
      queue.pop_front();
      comp.push_back(node);
      const auto ij = grid.node_ij(node);
      for (int a = 0; a < grid.dim(); ++a) {
        for (int step : {-1, 1}) {
          auto q = ij;
          q[a] += step;
          if (q[a] < 0 || q[a] >= grid.n(a)) continue;
          const auto nb = grid.node_index(q[0], q[1]);
          if (member[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace ddsplit
