#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <set>

#include "ddsplit/decomposition.hpp"

using namespace ddsplit;

namespace {

Grid line(int n, double lo = 0.0, double hi = 1.0) {
  const std::array<int, 1> nn{n};
  const std::array<double, 1> l{lo};
  const std::array<double, 1> h{hi};
  return build_grid(1, nn, l, h);
}

Grid square(int n) {
  const std::array<int, 2> nn{n, n};
  const std::array<double, 2> l{0.0, 0.0};
  const std::array<double, 2> h{1.0, 1.0};
  return build_grid(2, nn, l, h);
}

DecompositionLayout strips(int s, double overlap) {
  DecompositionLayout l;
  l.kind = LayoutKind::strips;
  l.count = s;
  l.overlap = overlap;
  return l;
}

PartitionOfUnity pou_for(const Grid& g, const DecompositionLayout& layout) {
  return build_partition_of_unity(g, build_decomposition(g, layout), layout.overlap);
}

std::vector<DecompositionLayout> all_layouts_2d() {
  DecompositionLayout blocks;
  blocks.kind = LayoutKind::blocks;
  blocks.blocks = {2, 2};
  blocks.overlap = 0.2;
  DecompositionLayout sep;
  sep.kind = LayoutKind::separating;
  sep.count = 3;
  sep.overlap = 0.1;
  return {strips(3, 0.15), blocks, sep};
}

}  // namespace

TEST(BuildDecomposition, SingleStripIsWholeDomain) {
  const Grid g = line(11);
  const auto subs = build_decomposition(g, strips(1, 0.0));
  ASSERT_EQ(subs.size(), 1u);
  EXPECT_EQ(subs[0].node_set.size(), g.node_count());
}

TEST(BuildDecomposition, TwoStripsWithOverlapPointTwo) {
  const Grid g = line(11);
  const auto subs = build_decomposition(g, strips(2, 0.2));
  ASSERT_EQ(subs.size(), 2u);
  const auto& a = subs[0].components[0];
  const auto& b = subs[1].components[0];
  EXPECT_DOUBLE_EQ(g.node_coords(g.node_index(a.lo[0]))[0], 0.0);
  EXPECT_NEAR(g.node_coords(g.node_index(a.hi[0]))[0], 0.6, 1e-12);
  EXPECT_NEAR(g.node_coords(g.node_index(b.lo[0]))[0], 0.4, 1e-12);
  EXPECT_DOUBLE_EQ(g.node_coords(g.node_index(b.hi[0]))[0], 1.0);
}

TEST(BuildDecomposition, SeparatingOneDimension) {
  const Grid g = line(41);
  DecompositionLayout l;
  l.kind = LayoutKind::separating;
  l.count = 2;
  l.overlap = 0.1;
  const auto subs = build_decomposition(g, l);
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_EQ(subs[1].shape, SubdomainShape::frame);
  ASSERT_EQ(subs[1].components.size(), 2u);
  EXPECT_EQ(subs[1].components[0].lo[0], 0);
  EXPECT_EQ(subs[1].components[1].hi[0], 40);
  EXPECT_LT(subs[1].components[0].hi[0], subs[1].components[1].lo[0]);
  EXPECT_TRUE(check_separating_condition(subs, g));
}

TEST(BuildDecomposition, CoverageForAllLayouts) {
  const Grid g = square(21);
  for (const auto& layout : all_layouts_2d()) {
    const auto subs = build_decomposition(g, layout);
    std::set<std::size_t> covered;
    for (const auto& s : subs) covered.insert(s.node_set.begin(), s.node_set.end());
    EXPECT_EQ(covered.size(), g.node_count());
  }
}

TEST(BuildDecomposition, FrameComponentsAreDisjoint) {
  const Grid g = square(21);
  DecompositionLayout l;
  l.kind = LayoutKind::separating;
  l.count = 2;
  l.overlap = 0.1;
  const auto subs = build_decomposition(g, l);
  const auto& frame = subs.back();
  ASSERT_EQ(frame.components.size(), 4u);
  std::vector<int> hits(g.node_count(), 0);
  for (const auto& box : frame.components) {
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      if (box.contains(g.node_ij(node), 2)) hits[node] += 1;
    }
  }
  std::size_t in_union = 0;
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    EXPECT_LE(hits[node], 1);
    in_union += hits[node];
  }
  EXPECT_EQ(in_union, frame.node_set.size());
}

TEST(BuildDecomposition, InfeasibleLayouts) {
  const Grid g = line(11);
  auto code = [&](const DecompositionLayout& l) {
    try {
      (void)build_decomposition(g, l);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io_error;
  };
  EXPECT_EQ(code(strips(2, 0.1)), ErrorCode::infeasible_layout);   // one cell of overlap
  EXPECT_EQ(code(strips(6, 0.2)), ErrorCode::infeasible_layout);   // too many pieces
  EXPECT_EQ(code(strips(0, 0.2)), ErrorCode::infeasible_layout);
  DecompositionLayout sep;
  sep.kind = LayoutKind::separating;
  sep.count = 1;
  sep.overlap = 0.2;
  EXPECT_EQ(code(sep), ErrorCode::infeasible_layout);
}

TEST(PartitionOfUnity, SingleSubdomainIsOne) {
  const Grid g = square(9);
  const auto pou = pou_for(g, strips(1, 0.0));
  for (double w : pou.node_weights(0)) EXPECT_EQ(w, 1.0);
  for (double w : pou.face_weights(0)) EXPECT_EQ(w, 1.0);
}

TEST(PartitionOfUnity, TwoStripRamp) {
  const Grid g = line(21);
  const auto pou = pou_for(g, strips(2, 0.2));
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    const double x = g.node_coords(node)[0];
    const double expect = std::clamp((0.6 - x) / 0.2, 0.0, 1.0);
    EXPECT_NEAR(pou.node_weights(0)[node], expect, 1e-14) << x;
    EXPECT_NEAR(pou.node_weights(1)[node], 1.0 - expect, 1e-14) << x;
  }
  for (std::size_t f = 0; f < g.face_count(); ++f) {
    const double x = g.face_midpoint(f)[0];
    EXPECT_NEAR(pou.face_weights(0)[f], std::clamp((0.6 - x) / 0.2, 0.0, 1.0), 1e-14) << x;
  }
}

TEST(PartitionOfUnity, SumsToOneNonnegativeAndZeroOutside) {
  const Grid g = square(21);
  for (const auto& layout : all_layouts_2d()) {
    const auto pou = pou_for(g, layout);
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      double s = 0.0;
      for (int l = 0; l < pou.size(); ++l) {
        const double w = pou.node_weights(l)[node];
        EXPECT_GE(w, 0.0);
        const auto& set = pou.subdomain(l).node_set;
        if (!std::binary_search(set.begin(), set.end(), node)) EXPECT_EQ(w, 0.0);
        s += w;
      }
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
    for (std::size_t f = 0; f < g.face_count(); ++f) {
      double s = 0.0;
      for (int l = 0; l < pou.size(); ++l) s += pou.face_weights(l)[f];
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
  }
}

TEST(PartitionOfUnity, LipschitzBound) {
  const Grid g = square(25);
  for (const auto& layout : all_layouts_2d()) {
    const auto pou = pou_for(g, layout);
    const double bound = 1.0 / pou.overlap_width() + 1e-12;
    for (int l = 0; l < pou.size(); ++l) {
      const auto w = pou.node_weights(l);
      for (std::size_t f = 0; f < g.face_count(); ++f) {
        const auto [a, b] = g.face_nodes(f);
        const double slope = std::abs(w[b] - w[a]) / g.dx(g.face_axis(f));
        EXPECT_LE(slope, bound);
      }
    }
  }
}

TEST(SeparatingCondition, Cases) {
  const Grid g = line(21);
  const auto one = build_decomposition(g, strips(1, 0.0));
  EXPECT_FALSE(check_separating_condition(one, g));
  const auto two = build_decomposition(g, strips(2, 0.2));
  EXPECT_FALSE(check_separating_condition(two, g));
  const Grid sq = square(21);
  DecompositionLayout sep;
  sep.kind = LayoutKind::separating;
  sep.count = 3;
  sep.overlap = 0.1;
  EXPECT_TRUE(check_separating_condition(build_decomposition(sq, sep), sq));
  DecompositionLayout blocks;
  blocks.kind = LayoutKind::blocks;
  blocks.blocks = {2, 2};
  blocks.overlap = 0.2;
  EXPECT_FALSE(check_separating_condition(build_decomposition(sq, blocks), sq));
}

TEST(SupportClosure, SingleSubdomainCoversAll) {
  const Grid g = square(7);
  const auto pou = pou_for(g, strips(1, 0.0));
  EXPECT_EQ(support_closure(pou, 0).size(), g.node_count());
}

TEST(SupportClosure, StripEndsOneNodePastSubdomain) {
  const Grid g = line(11);
  const auto pou = pou_for(g, strips(2, 0.2));
  const auto sc = support_closure(pou, 0);
  EXPECT_EQ(sc.front(), 0u);
  // chi_0 vanishes at x = 0.6, its last positive face ends there, and the
  // halo adds one more node.
  EXPECT_NEAR(g.node_coords(sc.back())[0], 0.7, 1e-12);
  EXPECT_EQ(sc.size(), 8u);
}

TEST(SupportClosure, FrameSplitsIntoComponents) {
  const Grid g = line(41);
  DecompositionLayout l;
  l.kind = LayoutKind::separating;
  l.count = 2;
  l.overlap = 0.1;
  const auto pou = pou_for(g, l);
  const auto sc = support_closure(pou, 1);
  const auto comps = connected_components(g, sc);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].front(), 0u);
  EXPECT_EQ(comps[1].back(), 40u);
  EXPECT_EQ(comps[0].size() + comps[1].size(), sc.size());
  EXPECT_EQ(connected_components(g, support_closure(pou, 0)).size(), 1u);
}

TEST(ConnectedComponents, TwoDimensionalFourConnectivity) {
  const Grid g = square(5);
  // Diagonal neighbours are separate components.
  const std::vector<std::size_t> nodes{g.node_index(1, 1), g.node_index(2, 2), g.node_index(3, 2)};
  const auto comps = connected_components(g, nodes);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 1u);
  EXPECT_EQ(comps[1].size(), 2u);
}
