// Uniform-refinement convergence studies with estimated orders of convergence.

#ifndef INFLAP_CONVERGENCE_HPP
#define INFLAP_CONVERGENCE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflap/estimator.hpp"
#include "inflap/solver.hpp"

namespace inflap {

struct EOCRow {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  double l2_error = 0.0;
  std::optional<double> l2_eoc;
  double h1_error = 0.0;
  std::optional<double> h1_eoc;
  double estimator = 0.0;
  std::optional<double> estimator_eoc;
  int iterations = 0;
};

struct EOCTable {
  std::vector<EOCRow> rows;
};

/// log(e_prev / e) / log(h_prev / h).
double eoc(double e_prev, double e, double h_prev, double h);

/// Per-level output hook, called after each level is solved.
struct LevelResult {
  int level = 0;
  MeshPtr mesh;
  const SolveReport* report = nullptr;
  const IndicatorField* indicators = nullptr;
};
using LevelCallback = std::function<void(const LevelResult&)>;

struct StudyOptions {
  int base_divisions = 4;
  EstimatorOptions estimator;
  LevelCallback on_level;
};

/// Thrown when a level fails; carries the rows completed so far.
class StudyFailure : public std::runtime_error {
 public:
  StudyFailure(const std::string& what, EOCTable partial, bool solver_error)
      : std::runtime_error(what), partial_(std::move(partial)), solver_error_(solver_error) {}
  const EOCTable& partial() const { return partial_; }
  bool solver_error() const { return solver_error_; }

 private:
  EOCTable partial_;
  bool solver_error_;
};

/// Solves on build_initial_mesh(base_divisions) and `levels - 1` uniform refinements of it.
EOCTable convergence_study(const ProblemData& problem, int levels, double tau,
                           const SolverConfig& config, const StudyOptions& options = {});
EOCTable convergence_study(const std::string& problem_name, int levels, double tau,
                           const SolverConfig& config, const StudyOptions& options = {});

}  // namespace inflap

#endif  // INFLAP_CONVERGENCE_HPP
