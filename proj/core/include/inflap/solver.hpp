// Laplacian-relaxed fixed-point iteration for the infinity Laplacian.
//
// Each step solves, for U^{n+1} in P1 with U^{n+1} = g on the boundary,
//
//   int A[U^n] : H[U^{n+1}] Psi = int (f + tr H[U^n] / tau) Psi   for all P1 Psi,
//   A[v] = grad v (x) grad v / |grad v|^2 + I / tau,
//
// with H eliminated through the HessianOperator, so the unknowns are vertex values only.

#ifndef INFLAP_SOLVER_HPP
#define INFLAP_SOLVER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflap/fespace.hpp"
#include "inflap/hessian.hpp"

namespace inflap {

struct ProblemData {
  ScalarField f;
  ScalarField g;
  /// Empty when no closed form is known.
  ScalarField exact_solution;
  VectorField exact_gradient;
  double tau = 1000.0;
};

struct SolverConfig {
  /// Stop once ||U^n - U^{n-1}||_{L2} <= increment_tol_factor * h^2.
  double increment_tol_factor = 10.0;
  int max_iterations = 100;
  /// Floor on |grad U|^2 in the diffusion tensor; only guards 0/0.
  double gradient_floor = 1e-10;
  double linear_solver_tol = 1e-10;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual, int iteration = -1)
      : std::runtime_error(what), residual_(residual), iteration_(iteration) {}
  double residual() const { return residual_; }
  int iteration() const { return iteration_; }

 private:
  double residual_;
  int iteration_;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// p (x) p / max(|p|^2, eps) + I / tau.
Mat2 diffusion_tensor(const Vec2& p, double tau, double eps);
TensorField diffusion_tensor(const P1Function& u, double tau, double eps);

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Step system for U^{n+1}; square with one row per vertex, generally nonsymmetric.
LinearSystem assemble_step(const HessianOperator& hessian, const P1Function& u_prev,
                           const TensorField& h_prev, const ProblemData& problem,
                           const SolverConfig& config);
LinearSystem assemble_step(const MeshPtr& mesh, const P1Function& u_prev,
                           const TensorField& h_prev, const ProblemData& problem,
                           const SolverConfig& config);

/// Identity rows on boundary dofs with rhs g(vertex); boundary columns lifted into the rhs.
void apply_dirichlet(LinearSystem& system, const P1Space& space, const ScalarField& g);

/// Sparse LU. Throws SolverFailure if the relative residual exceeds config.linear_solver_tol.
Eigen::VectorXd solve_linear(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                             const SolverConfig& config);

/// Conforming P1 solution of Delta U = f, U = g on the boundary.
P1Function default_initializer(const MeshPtr& mesh, const ProblemData& problem,
                               const SolverConfig& config = {});

struct SolveReport {
  P1Function solution;
  /// Iterate preceding `solution`; the estimator needs both.
  P1Function previous;
  TensorField hessian;
  int iterations = 0;
  std::vector<double> increments;
  double tolerance = 0.0;
  bool converged = false;
};

SolveReport fixed_point_solve(const MeshPtr& mesh, const ProblemData& problem,
                              const SolverConfig& config,
                              std::optional<P1Function> initial = std::nullopt);

}  // namespace inflap

#endif  // INFLAP_SOLVER_HPP
