#include "inflap/convergence.hpp"

#include <cmath>

#include "inflap/problems.hpp"

namespace inflap {

double eoc(double e_prev, double e, double h_prev, double h) {
  return std::log(e_prev / e) / std::log(h_prev / h);
}

EOCTable convergence_study(const ProblemData& problem, int levels, double tau,
                           const SolverConfig& config, const StudyOptions& options) {
  if (levels < 2) throw std::invalid_argument("convergence_study: need at least two levels");
  if (!problem.exact_solution || !problem.exact_gradient) {
    throw std::invalid_argument("convergence_study: problem has no exact solution");
  }
  ProblemData data = problem;
  data.tau = tau;

  EOCTable table;
  auto mesh = std::make_shared<const Triangulation>(build_initial_mesh(options.base_divisions));
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = std::make_shared<const Triangulation>(uniform_refine(*mesh));
    SolveReport report;
    try {
      report = fixed_point_solve(mesh, data, config);
    } catch (const DivergenceError& e) {
      throw StudyFailure(std::string(e.what()) + " (level " + std::to_string(level) + ")", table, true);
    } catch (const SolverFailure& e) {
      throw StudyFailure(std::string(e.what()) + " (level " + std::to_string(level) + ")", table, true);
    }
    const IndicatorField indicators =
        estimate(report.previous, report.solution, data.f, data.tau, options.estimator);

    EOCRow row;
    row.level = level;
    row.h = mesh->max_diameter();
    row.dofs = mesh->num_vertices();
    row.l2_error = l2_error(report.solution, data.exact_solution);
    row.h1_error = h1_semi_error(report.solution, data.exact_gradient);
    row.estimator = indicators.l2_estimate;
    row.iterations = report.iterations;
    if (!table.rows.empty()) {
      const EOCRow& prev = table.rows.back();
      row.l2_eoc = eoc(prev.l2_error, row.l2_error, prev.h, row.h);
      row.h1_eoc = eoc(prev.h1_error, row.h1_error, prev.h, row.h);
      row.estimator_eoc = eoc(prev.estimator, row.estimator, prev.h, row.h);
    }
    table.rows.push_back(row);
    if (options.on_level) options.on_level(LevelResult{level, mesh, &report, &indicators});
  }
  return table;
}

EOCTable convergence_study(const std::string& problem_name, int levels, double tau,
                           const SolverConfig& config, const StudyOptions& options) {
  return convergence_study(find_problem(problem_name).data, levels, tau, config, options);
}

}  // namespace inflap
