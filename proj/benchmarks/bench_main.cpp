#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "inflap/estimator.hpp"
#include "inflap/hessian.hpp"
#include "inflap/mesh.hpp"
#include "inflap/problems.hpp"
#include "inflap/solver.hpp"

namespace {

using namespace inflap;

MeshPtr uniform_mesh(int refinements) {
  Triangulation m = build_initial_mesh(4);
  for (int i = 0; i < refinements; ++i) m = uniform_refine(m);
  return std::make_shared<const Triangulation>(std::move(m));
}

void BM_UniformRefine(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(uniform_refine(*mesh));
  state.counters["triangles"] = static_cast<double>(mesh->num_triangles());
}
BENCHMARK(BM_UniformRefine)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

// Marks a tenth of the triangles, spread over the mesh.
void BM_LocalRefine(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  std::vector<Index> marked;
  for (std::size_t k = 0; k < mesh->num_triangles(); k += 10) marked.push_back(static_cast<Index>(k));
  for (auto _ : state) benchmark::DoNotOptimize(refine(*mesh, marked));
}
BENCHMARK(BM_LocalRefine)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_HessianOperator(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(HessianOperator(mesh));
  state.counters["vertices"] = static_cast<double>(mesh->num_vertices());
}
BENCHMARK(BM_HessianOperator)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_StepAssembly(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  const ProblemData& data = classical_problem().data;
  const SolverConfig config;
  const HessianOperator hessian(mesh);
  const P1Function u = interpolate(mesh, data.g);
  const TensorField h = hessian.apply(u);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_step(hessian, u, h, data, config));
}
BENCHMARK(BM_StepAssembly)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_StepSolve(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  const ProblemData& data = classical_problem().data;
  const SolverConfig config;
  const HessianOperator hessian(mesh);
  const P1Function u = interpolate(mesh, data.g);
  LinearSystem system = assemble_step(hessian, u, hessian.apply(u), data, config);
  apply_dirichlet(system, P1Space(mesh), data.g);
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(system.matrix, system.rhs, config));
}
BENCHMARK(BM_StepSolve)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_FixedPointSolve(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  const ProblemData& data = aronsson_problem().data;
  for (auto _ : state) benchmark::DoNotOptimize(fixed_point_solve(mesh, data, SolverConfig{}));
}
BENCHMARK(BM_FixedPointSolve)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_Estimate(benchmark::State& state) {
  const MeshPtr mesh = uniform_mesh(static_cast<int>(state.range(0)));
  const ProblemData& data = aronsson_problem().data;
  const SolveReport report = fixed_point_solve(mesh, data, SolverConfig{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(report.previous, report.solution, data.f, data.tau));
  }
}
BENCHMARK(BM_Estimate)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
