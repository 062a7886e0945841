#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "ddsplit/grid.hpp"

namespace ddsplit::detail {

struct GridData {
  int dim = 1;
  std::array<int, 2> n{1, 1};
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
  std::array<double, 2> dx{1.0, 1.0};

  std::vector<NodeKind> kind;
  std::vector<double> node_weight;
  std::vector<long> interior_pos;
  std::vector<std::size_t> interior_nodes;

  std::vector<int> face_axis;
  std::vector<std::array<std::size_t, 2>> face_nodes;
  std::vector<double> face_weight;
  // CSR layout: stencil of (face, component) is
  // stencil[offset[face*dim + c] .. offset[face*dim + c + 1]).
  std::vector<std::size_t> stencil_offset;
  std::vector<StencilEntry> stencil;

  // Discrete Dirichlet Laplacian negated (SPD) on interior nodes, with its
  // factorization. Built once at construction and read-only afterwards.
  Eigen::SparseMatrix<double> neg_laplacian;
  std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> neg_laplacian_llt;
};

}  // namespace ddsplit::detail
