#include "ddsplit/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "grid_data.hpp"

namespace ddsplit {

namespace {

using detail::GridData;

// Appends the merged stencil `terms` for one (face, component) slot.
void push_stencil(GridData& g, std::map<std::size_t, double>& terms) {
  for (const auto& [node, coef] : terms) {
    if (coef != 0.0) g.stencil.push_back({node, coef});
  }
  g.stencil_offset.push_back(g.stencil.size());
  terms.clear();
}

// Tangential component at a face along `axis` joining nodes a and b: the mean
// of every available difference along the other axis at those two nodes.
void tangential_terms(const GridData& g, int axis, std::array<int, 2> ia, std::array<int, 2> ib,
                      std::map<std::size_t, double>& terms) {
  const int t = 1 - axis;
  const double h = g.dx[t];
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& ij : {ia, ib}) {
    auto at = [&](int k) {
      std::array<int, 2> p = ij;
      p[t] = k;
      return static_cast<std::size_t>(p[0]) + static_cast<std::size_t>(g.n[0]) * p[1];
    };
    const int k = ij[t];
    if (k >= 1) edges.emplace_back(at(k - 1), at(k));
    if (k <= g.n[t] - 2) edges.emplace_back(at(k), at(k + 1));
  }
  const double c = 1.0 / (static_cast<double>(edges.size()) * h);
  for (const auto& [lo, hi] : edges) {
    terms[lo] -= c;
    terms[hi] += c;
  }
}

void build_faces(GridData& g) {
  const int d = g.dim;
  g.stencil_offset.push_back(0);
  std::map<std::size_t, double> terms;
  const double cell = g.dx[0] * (d == 2 ? g.dx[1] : 1.0);
  for (int axis = 0; axis < d; ++axis) {
    const int t = 1 - axis;
    const int ni = g.n[0] - (axis == 0 ? 1 : 0);
    const int nj = d == 2 ? g.n[1] - (axis == 1 ? 1 : 0) : 1;
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < ni; ++i) {
        std::array<int, 2> ia{i, j};
        std::array<int, 2> ib = ia;
        ib[axis] += 1;
        const auto na = static_cast<std::size_t>(ia[0]) + static_cast<std::size_t>(g.n[0]) * ia[1];
        const auto nb = static_cast<std::size_t>(ib[0]) + static_cast<std::size_t>(g.n[0]) * ib[1];
        g.face_axis.push_back(axis);
        g.face_nodes.push_back({na, nb});
        double w = cell / d;
        if (d == 2 && (ia[t] == 0 || ia[t] == g.n[t] - 1)) w *= 0.5;
        g.face_weight.push_back(w);
        for (int c = 0; c < d; ++c) {
          if (c == axis) {
            terms[na] -= 1.0 / g.dx[axis];
            terms[nb] += 1.0 / g.dx[axis];
          } else {
            tangential_terms(g, axis, ia, ib, terms);
          }
          push_stencil(g, terms);
        }
      }
    }
  }
}

void build_hminus1(GridData& g) {
  const auto m = static_cast<Eigen::Index>(g.interior_nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m) * (1 + 2 * g.dim));
  for (std::size_t p = 0; p < g.interior_nodes.size(); ++p) {
    const auto node = g.interior_nodes[p];
    const auto ij = std::array<int, 2>{static_cast<int>(node % g.n[0]),
                                       static_cast<int>(node / g.n[0])};
    double diag = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double c = 1.0 / (g.dx[a] * g.dx[a]);
      diag += 2.0 * c;
      for (int s : {-1, 1}) {
        auto q = ij;
        q[a] += s;
        const auto nb = static_cast<std::size_t>(q[0]) + static_cast<std::size_t>(g.n[0]) * q[1];
        const long pos = g.interior_pos[nb];
        if (pos >= 0) trip.emplace_back(static_cast<Eigen::Index>(p), pos, -c);
      }
    }
    trip.emplace_back(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p), diag);
  }
  g.neg_laplacian.resize(m, m);
  g.neg_laplacian.setFromTriplets(trip.begin(), trip.end());
  g.neg_laplacian_llt =
      std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(g.neg_laplacian);
  if (g.neg_laplacian_llt->info() != Eigen::Success) {
    throw Error(ErrorCode::singular_operator, "Dirichlet Laplacian factorization failed");
  }
}

}  // namespace

Grid build_grid(int dim, std::span<const int> n_per_axis, std::span<const double> lo,
                std::span<const double> hi) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorCode::invalid_extent, fmt::format("unsupported dimension {}", dim));
  }
  const auto d = static_cast<std::size_t>(dim);
  if (n_per_axis.size() != d || lo.size() != d || hi.size() != d) {
    throw Error(ErrorCode::invalid_extent, "per-axis arrays must have one entry per dimension");
  }
  auto g = std::make_shared<GridData>();
  g->dim = dim;
  for (std::size_t a = 0; a < d; ++a) {
    if (!(hi[a] > lo[a]) || !std::isfinite(lo[a]) || !std::isfinite(hi[a])) {
      throw Error(ErrorCode::invalid_extent,
                  fmt::format("axis {}: need lo < hi, got [{}, {}]", a, lo[a], hi[a]));
    }
    if (n_per_axis[a] < 3) {
      throw Error(ErrorCode::too_coarse,
                  fmt::format("axis {}: need at least 3 nodes, got {}", a, n_per_axis[a]));
    }
    g->n[a] = n_per_axis[a];
    g->lo[a] = lo[a];
    g->hi[a] = hi[a];
    g->dx[a] = (hi[a] - lo[a]) / (n_per_axis[a] - 1);
  }

  const std::size_t count = static_cast<std::size_t>(g->n[0]) * g->n[1];
  g->kind.resize(count);
  g->node_weight.resize(count);
  g->interior_pos.assign(count, -1);
  for (std::size_t node = 0; node < count; ++node) {
    const int i = static_cast<int>(node % g->n[0]);
    const int j = static_cast<int>(node / g->n[0]);
    const std::array<int, 2> ij{i, j};
    bool hull = false;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      w *= g->dx[a];
      if (ij[a] == 0 || ij[a] == g->n[a] - 1) {
        hull = true;
        w *= 0.5;
      }
    }
    g->kind[node] = hull ? NodeKind::boundary : NodeKind::interior;
    g->node_weight[node] = w;
    if (!hull) {
      g->interior_pos[node] = static_cast<long>(g->interior_nodes.size());
      g->interior_nodes.push_back(node);
    }
  }
  build_faces(*g);
  build_hminus1(*g);
  return Grid(std::move(g));
}

int Grid::dim() const noexcept { return data_->dim; }
int Grid::n(int axis) const noexcept { return data_->n[axis]; }
double Grid::lo(int axis) const noexcept { return data_->lo[axis]; }
double Grid::hi(int axis) const noexcept { return data_->hi[axis]; }
double Grid::dx(int axis) const noexcept { return data_->dx[axis]; }
std::size_t Grid::node_count() const noexcept { return data_->kind.size(); }
std::size_t Grid::face_count() const noexcept { return data_->face_axis.size(); }
std::size_t Grid::interior_count() const noexcept { return data_->interior_nodes.size(); }

std::size_t Grid::node_index(int i, int j) const noexcept {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(data_->n[0]) * j;
}

std::array<int, 2> Grid::node_ij(std::size_t node) const noexcept {
  return {static_cast<int>(node % data_->n[0]), static_cast<int>(node / data_->n[0])};
}

std::array<double, 2> Grid::node_coords(std::size_t node) const noexcept {
  const auto ij = node_ij(node);
  std::array<double, 2> x{0.0, 0.0};
  for (int a = 0; a < data_->dim; ++a) x[a] = data_->lo[a] + ij[a] * data_->dx[a];
  return x;
}

NodeKind Grid::node_kind(std::size_t node) const noexcept { return data_->kind[node]; }
std::span<const NodeKind> Grid::boundary_mask() const noexcept { return data_->kind; }
double Grid::node_weight(std::size_t node) const noexcept { return data_->node_weight[node]; }
std::span<const double> Grid::node_weights() const noexcept { return data_->node_weight; }
int Grid::face_axis(std::size_t face) const noexcept { return data_->face_axis[face]; }

std::array<std::size_t, 2> Grid::face_nodes(std::size_t face) const noexcept {
  return data_->face_nodes[face];
}

std::array<double, 2> Grid::face_midpoint(std::size_t face) const noexcept {
  auto x = node_coords(data_->face_nodes[face][0]);
  x[data_->face_axis[face]] += 0.5 * data_->dx[data_->face_axis[face]];
  return x;
}

double Grid::face_weight(std::size_t face) const noexcept { return data_->face_weight[face]; }

std::span<const StencilEntry> Grid::face_stencil(std::size_t face, int component) const noexcept {
  const auto slot = face * static_cast<std::size_t>(data_->dim) + component;
  const auto b = data_->stencil_offset[slot];
  const auto e = data_->stencil_offset[slot + 1];
  return {data_->stencil.data() + b, e - b};
}

long Grid::interior_position(std::size_t node) const noexcept { return data_->interior_pos[node]; }
std::span<const std::size_t> Grid::interior_nodes() const noexcept { return data_->interior_nodes; }

bool Grid::same_as(const Grid& other) const noexcept {
  if (data_ == other.data_) return true;
  const auto& a = *data_;
  const auto& b = *other.data_;
  return a.dim == b.dim && a.n == b.n && a.lo == b.lo && a.hi == b.hi;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::grid_mismatch, "fields live on different grids");
}

// ---------------------------------------------------------------------------

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.node_count(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.node_count()) {
    throw Error(ErrorCode::grid_mismatch,
                fmt::format("expected {} values, got {}", grid_.node_count(), values_.size()));
  }
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) { return axpy(1.0, other); }

Field& Field::operator-=(const Field& other) { return axpy(-1.0, other); }

Field& Field::operator*=(double scale) noexcept {
  for (auto& v : values_) v *= scale;
  return *this;
}

Field& Field::axpy(double scale, const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

FluxField::FluxField(Grid grid)
    : grid_(std::move(grid)), values_(grid_.face_count() * grid_.dim(), 0.0) {}

std::span<double> FluxField::at(std::size_t face) noexcept {
  const auto d = static_cast<std::size_t>(grid_.dim());
  return {values_.data() + face * d, d};
}

std::span<const double> FluxField::at(std::size_t face) const noexcept {
  const auto d = static_cast<std::size_t>(grid_.dim());
  return {values_.data() + face * d, d};
}

// ---------------------------------------------------------------------------

FluxField gradient(const Field& u) {
  const Grid& g = u.grid();
  FluxField q(g);
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    auto out = q.at(f);
    for (int c = 0; c < g.dim(); ++c) {
      double s = 0.0;
      for (const auto& e : g.face_stencil(f, c)) s += e.coef * u[e.node];
      out[c] = s;
    }
  }
  return q;
}

Field divergence_neumann(const FluxField& q) {
  const Grid& g = q.grid();
  Field out(g);
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const double w = g.face_weight(f);
    const auto qf = q.at(f);
    for (int c = 0; c < g.dim(); ++c) {
      if (qf[c] == 0.0) continue;
      for (const auto& e : g.face_stencil(f, c)) out[e.node] -= w * qf[c] * e.coef;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= g.node_weight(i);
  return out;
}

Field dirichlet_laplacian(const Field& w) {
  const Grid& g = w.grid();
  Field out(g);
  auto value = [&](std::size_t node) { return g.is_boundary(node) ? 0.0 : w[node]; };
  for (const auto node : g.interior_nodes()) {
    const auto ij = g.node_ij(node);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      auto lo = ij;
      auto hi = ij;
      lo[a] -= 1;
      hi[a] += 1;
      s += (value(g.node_index(lo[0], lo[1])) - 2.0 * w[node] + value(g.node_index(hi[0], hi[1]))) /
           (g.dx(a) * g.dx(a));
    }
    out[node] = s;
  }
  return out;
}

double l2_inner(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  const auto w = u.grid().node_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * (u[i] * v[i]);
  return s;
}

double l2_norm(const Field& u) { return std::sqrt(std::max(0.0, l2_inner(u, u))); }

double face_inner(const FluxField& a, const FluxField& b) {
  require_same_grid(a.grid(), b.grid());
  const Grid& g = a.grid();
  double s = 0.0;
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const auto af = a.at(f);
    const auto bf = b.at(f);
    double dot = 0.0;
    for (int c = 0; c < g.dim(); ++c) dot += af[c] * bf[c];
    s += g.face_weight(f) * dot;
  }
  return s;
}

Field inverse_dirichlet_laplacian(const Field& v) {
  const Grid& g = v.grid();
  const auto& data = g.data();
  const auto interior = g.interior_nodes();
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t p = 0; p < interior.size(); ++p) rhs[static_cast<Eigen::Index>(p)] = v[interior[p]];
  const Eigen::VectorXd x = data.neg_laplacian_llt->solve(rhs);
  Field out(g);
  for (std::size_t p = 0; p < interior.size(); ++p) out[interior[p]] = x[static_cast<Eigen::Index>(p)];
  return out;
}

double hminus1_inner(const Field& u, const Field& v) {
  require_same_grid(u.grid(), v.grid());
  const Field x = inverse_dirichlet_laplacian(v);
  const Grid& g = u.grid();
  double s = 0.0;
  for (const auto node : g.interior_nodes()) s += g.node_weight(node) * (u[node] * x[node]);
  return s;
}

double hminus1_norm(const Field& u) { return std::sqrt(std::max(0.0, hminus1_inner(u, u))); }

double pivot_inner(Pivot pivot, const Field& u, const Field& v) {
  return pivot == Pivot::l2 ? l2_inner(u, v) : hminus1_inner(u, v);
}

double pivot_norm(Pivot pivot, const Field& u) {
  return pivot == Pivot::l2 ? l2_norm(u) : hminus1_norm(u);
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_extent: return "InvalidExtent";
    case ErrorCode::too_coarse: return "TooCoarse";
    case ErrorCode::grid_mismatch: return "GridMismatch";
    case ErrorCode::singular_operator: return "SingularOperator";
    case ErrorCode::infeasible_layout: return "InfeasibleLayout";
    case ErrorCode::uncovered_node: return "UncoveredNode";
    case ErrorCode::invalid_spec: return "InvalidSpec";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::invalid_step: return "InvalidStep";
    case ErrorCode::step_too_large: return "StepTooLarge";
    case ErrorCode::invalid_params: return "InvalidParams";
    case ErrorCode::reference_unavailable: return "ReferenceUnavailable";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::config_error: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ddsplit
