#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "catlab/comparison.hpp"
#include "catlab/harmonic/disc_mesh.hpp"
#include "catlab/harmonic/harmonic.hpp"
#include "catlab/spaces/grid_disc.hpp"
#include "catlab/spaces/model_surface.hpp"

using namespace catlab;

namespace {

spaces::GridDisc hyperbolic_grid(double h) {
  return spaces::GridDisc::sample(h, 0.8, [](double x, double y) { return 2.0 / (1.0 - x * x - y * y); });
}

void BM_GridShortestPaths(benchmark::State& state) {
  const double h = 1.0 / static_cast<double>(state.range(0));
  const auto graph = spaces::grid_to_graph(hyperbolic_grid(h));
  for (auto _ : state) benchmark::DoNotOptimize(graph.shortest_paths(0).distance(graph.vertex_count() - 1));
  state.counters["vertices"] = static_cast<double>(graph.vertex_count());
}
BENCHMARK(BM_GridShortestPaths)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CheckCatModel(benchmark::State& state) {
  const spaces::ModelSurface s(-1.0);
  comparison::CheckOptions o;
  o.kappa = -1.0;
  o.n_triangles = static_cast<std::size_t>(state.range(0));
  o.max_perimeter = 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(comparison::check_cat(s, o).max_defect);
}
BENCHMARK(BM_CheckCatModel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CheckCatGrid(benchmark::State& state) {
  const auto grid = hyperbolic_grid(0.02);
  comparison::CheckOptions o;
  o.kappa = -1.0;
  o.n_triangles = static_cast<std::size_t>(state.range(0));
  o.max_perimeter = 0.6;
  for (auto _ : state) benchmark::DoNotOptimize(comparison::check_cat(grid, o).max_defect);
}
BENCHMARK(BM_CheckCatGrid)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_HarmonicSolve(benchmark::State& state) {
  const auto mesh = harmonic::DiscMesh::ring_disc(static_cast<int>(state.range(0)));
  const spaces::ModelSurface h(-1.0);
  std::vector<spaces::ModelPoint> trace;
  const std::size_t n = mesh.boundary().size();
  for (std::size_t k = 0; k < n; ++k) {
    trace.push_back(h.polar(1.0 + 0.3 * std::sin(3.0 * k), 2.0 * std::numbers::pi * k / n));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(harmonic::solve_harmonic<spaces::ModelSurface>(mesh, h, trace).sweeps);
  }
  state.counters["vertices"] = static_cast<double>(mesh.vertex_count());
}
BENCHMARK(BM_HarmonicSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
