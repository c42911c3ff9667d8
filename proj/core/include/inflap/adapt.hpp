// SOLVE -> ESTIMATE -> MARK -> REFINE driver.

#ifndef INFLAP_ADAPT_HPP
#define INFLAP_ADAPT_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "inflap/estimator.hpp"
#include "inflap/solver.hpp"

namespace inflap {

struct AdaptiveConfig {
  /// Doerfler fraction: marked set carries theta^2 of the total squared indicator.
  double theta = 0.5;
  /// Stop once the l2 estimate drops to this value.
  double estimator_tol = 0.1;
  int max_cycles = 30;
  /// Stop before refining past this many vertices.
  std::size_t dof_budget = 200000;
  double tau = 0.1;
  SolverConfig solver;
  EstimatorOptions estimator;
};

struct CycleRecord {
  int cycle = 0;
  std::size_t dofs = 0;
  std::size_t triangles = 0;
  double estimate = 0.0;
  double estimate_l1 = 0.0;
  int iterations = 0;
  std::optional<double> l2_error;
  std::optional<double> h1_error;
};

struct AdaptiveHistory {
  std::vector<CycleRecord> cycles;
};

struct AdaptiveResult {
  SolveReport report;
  MeshPtr mesh;
  IndicatorField indicators;
  AdaptiveHistory history;
  bool reached_tolerance = false;
};

/// Doerfler marking, greedy in decreasing eta with ties broken by triangle id.
std::vector<Index> mark(const IndicatorField& indicators, double theta);

/// Prolongation of a P1 function onto a refinement of its mesh (new vertices take the
/// mean of the endpoints of the edge they bisected).
P1Function prolongate(const P1Function& coarse, const MeshPtr& fine);

AdaptiveResult adaptive_solve(const ProblemData& problem, const MeshPtr& initial_mesh,
                              const AdaptiveConfig& config);

}  // namespace inflap

#endif  // INFLAP_ADAPT_HPP
