#include <benchmark/benchmark.h>

#include <array>
#include <cmath>
#include <memory>
#include <numbers>

#include "ddsplit/integrators.hpp"

using namespace ddsplit;

namespace {

Grid square(int n) {
  const std::array<int, 2> nn{n, n};
  const std::array<double, 2> lo{0.0, 0.0};
  const std::array<double, 2> hi{1.0, 1.0};
  return build_grid(2, nn, lo, hi);
}

ProblemKind problem(bool porous) {
  ProblemKind k;
  k.family = porous ? Family::porous_medium_dirichlet : Family::p_laplace_neumann;
  k.spec.kind = porous ? AlphaKind::porous_medium : AlphaKind::p_laplace;
  k.spec.p = 3.0;
  return k;
}

std::shared_ptr<const PartitionOfUnity> blocks(const Grid& g) {
  DecompositionLayout layout;
  layout.kind = LayoutKind::blocks;
  layout.blocks = {2, 2};
  layout.overlap = 0.125;
  return std::make_shared<const PartitionOfUnity>(
      build_partition_of_unity(g, build_decomposition(g, layout), layout.overlap));
}

Field smooth(const Grid& g, bool zero_hull) {
  Field u(g);
  for (std::size_t j = 0; j < u.size(); ++j) {
    const auto x = g.node_coords(j);
    const double v = std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
    u[j] = zero_hull ? v : 1.0 + v;
  }
  return u;
}

void BM_ResolventFull(benchmark::State& state) {
  const bool porous = state.range(1) != 0;
  const Grid g = square(static_cast<int>(state.range(0)));
  const auto op = SubOperator::full(problem(porous), g);
  const Field u = smooth(g, porous);
  for (auto _ : state) benchmark::DoNotOptimize(solve_resolvent(op, 0.01, u, {}));
}
BENCHMARK(BM_ResolventFull)->ArgsProduct({{17, 33, 65}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_StepSum(benchmark::State& state) {
  const bool porous = state.range(1) != 0;
  const Grid g = square(static_cast<int>(state.range(0)));
  const SplittingContext ctx(problem(porous), blocks(g), {}, static_cast<int>(state.range(2)));
  const Field u = smooth(g, porous);
  for (auto _ : state) benchmark::DoNotOptimize(step_sum(ctx, 0.01, u));
}
BENCHMARK(BM_StepSum)->ArgsProduct({{33, 65}, {0, 1}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_StepLie(benchmark::State& state) {
  const bool porous = state.range(1) != 0;
  const Grid g = square(static_cast<int>(state.range(0)));
  const SplittingContext ctx(problem(porous), blocks(g));
  const Field u = smooth(g, porous);
  for (auto _ : state) benchmark::DoNotOptimize(step_lie(ctx, 0.01, u));
}
BENCHMARK(BM_StepLie)->ArgsProduct({{33, 65}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_HMinus1Norm(benchmark::State& state) {
  const Grid g = square(static_cast<int>(state.range(0)));
  const Field u = smooth(g, true);
  for (auto _ : state) benchmark::DoNotOptimize(hminus1_norm(u));
}
BENCHMARK(BM_HMinus1Norm)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMicrosecond);

void BM_Apply(benchmark::State& state) {
  const bool porous = state.range(1) != 0;
  const Grid g = square(static_cast<int>(state.range(0)));
  const auto pou = blocks(g);
  const auto op = SubOperator::local(problem(porous), pou, 0);
  const Field u = smooth(g, porous);
  for (auto _ : state) benchmark::DoNotOptimize(apply(op, u));
}
BENCHMARK(BM_Apply)->ArgsProduct({{65, 129}, {0, 1}})->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
