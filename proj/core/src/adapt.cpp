#include "inflap/adapt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace inflap {

std::vector<Index> mark(const IndicatorField& indicators, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("mark: theta must lie in (0,1]");
  const auto& eta = indicators.eta;
  std::vector<Index> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&eta](Index a, Index b) {
    return eta[static_cast<std::size_t>(a)] > eta[static_cast<std::size_t>(b)];
  });

  double total = 0.0;
  for (const Index k : order) total += eta[static_cast<std::size_t>(k)] * eta[static_cast<std::size_t>(k)];
  std::vector<Index> marked;
  if (!(total > 0.0)) return marked;

  // Relative slack absorbs rounding in theta^2 * total.
  const double target = theta * theta * total * (1.0 - 1e-12);
  double sum = 0.0;
  for (const Index k : order) {
    if (sum >= target) break;
    const double e = eta[static_cast<std::size_t>(k)];
    if (!(e > 0.0)) break;
    sum += e * e;
    marked.push_back(k);
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

P1Function prolongate(const P1Function& coarse, const MeshPtr& fine) {
  const std::size_t nc = coarse.mesh->num_vertices();
  if (fine->num_vertices() < nc) throw std::invalid_argument("prolongate: target mesh is coarser");
  P1Function u = P1Function::zeros(fine);
  u.values.head(static_cast<Eigen::Index>(nc)) = coarse.values;
  for (std::size_t v = nc; v < fine->num_vertices(); ++v) {
    const auto& parents = fine->vertices()[v].parents;
    if (!parents || static_cast<std::size_t>((*parents)[0]) >= nc ||
        static_cast<std::size_t>((*parents)[1]) >= nc) {
      throw std::invalid_argument("prolongate: vertex " + std::to_string(v) +
                                  " is not a midpoint of a coarse edge");
    }
    u.values[static_cast<Eigen::Index>(v)] =
        0.5 * (coarse.values[(*parents)[0]] + coarse.values[(*parents)[1]]);
  }
  return u;
}

AdaptiveResult adaptive_solve(const ProblemData& problem, const MeshPtr& initial_mesh,
                              const AdaptiveConfig& config) {
  if (!(config.theta > 0.0 && config.theta <= 1.0)) {
    throw std::invalid_argument("adaptive_solve: theta must lie in (0,1]");
  }
  if (!(config.estimator_tol > 0.0)) throw std::invalid_argument("adaptive_solve: estimator_tol must be positive");
  if (config.max_cycles < 1) throw std::invalid_argument("adaptive_solve: max_cycles < 1");

  ProblemData data = problem;
  data.tau = config.tau;

  AdaptiveResult result;
  MeshPtr mesh = initial_mesh;
  std::optional<P1Function> warm;
  for (int cycle = 0; cycle < config.max_cycles; ++cycle) {
    SolveReport report;
    try {
      report = fixed_point_solve(mesh, data, config.solver, warm);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " (adaptive cycle " + std::to_string(cycle) + ")",
                            e.iteration());
    } catch (const SolverFailure& e) {
      throw SolverFailure(std::string(e.what()) + " (adaptive cycle " + std::to_string(cycle) + ")",
                          e.residual(), e.iteration());
    }
    IndicatorField indicators = estimate(report.previous, report.solution, data.f, data.tau, config.estimator);

    CycleRecord rec;
    rec.cycle = cycle;
    rec.dofs = mesh->num_vertices();
    rec.triangles = mesh->num_triangles();
    rec.estimate = indicators.l2_estimate;
    rec.estimate_l1 = indicators.global_estimate;
    rec.iterations = report.iterations;
    if (data.exact_solution) rec.l2_error = l2_error(report.solution, data.exact_solution);
    if (data.exact_gradient) rec.h1_error = h1_semi_error(report.solution, data.exact_gradient);
    result.history.cycles.push_back(rec);

    result.reached_tolerance = indicators.l2_estimate <= config.estimator_tol;
    const bool last = result.reached_tolerance || cycle + 1 == config.max_cycles ||
                      mesh->num_vertices() >= config.dof_budget;
    if (last) {
      result.report = std::move(report);
      result.indicators = std::move(indicators);
      break;
    }

    const std::vector<Index> marked = mark(indicators, config.theta);
    auto fine = std::make_shared<const Triangulation>(refine(*mesh, marked));
    warm = prolongate(report.solution, fine);
    mesh = std::move(fine);
  }
  result.mesh = mesh;
  return result;
}

}  // namespace inflap
