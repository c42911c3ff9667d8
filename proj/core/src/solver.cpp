#include "inflap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace inflap {

namespace {

void require_same_mesh(const MeshPtr& a, const MeshPtr& b, const char* what) {
  if (a.get() != b.get()) throw std::invalid_argument(std::string(what) + ": mesh mismatch");
}

// int f phi_i over every triangle with an order-4 rule.
Eigen::VectorXd load_vector(const Triangulation& mesh, const ScalarField& f) {
  const QuadratureRule& quad = triangle_rule(4);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    const auto p = mesh.corners(kk);
    const auto& v = mesh.triangle(kk).vertices;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double fw = quad.weights[q] * mesh.area(kk) * f(to_physical(p, quad.points[q]));
      for (int j = 0; j < 3; ++j) load[v[j]] += fw * quad.points[q][j];
    }
  }
  return load;
}

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double bn = b.norm();
  return (a * x - b).norm() / (bn > 0.0 ? bn : 1.0);
}

}  // namespace

Mat2 diffusion_tensor(const Vec2& p, double tau, double eps) {
  return p * p.transpose() / std::max(p.squaredNorm(), eps) + Mat2::Identity() / tau;
}

TensorField diffusion_tensor(const P1Function& u, double tau, double eps) {
  if (!(tau > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("diffusion_tensor: tau and eps must be positive");
  }
  TensorField a = TensorField::zeros(u.mesh);
  for (std::size_t k = 0; k < u.mesh->num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    a.set(kk, diffusion_tensor(u.gradient(kk), tau, eps));
  }
  return a;
}

LinearSystem assemble_step(const HessianOperator& hessian, const P1Function& u_prev,
                           const TensorField& h_prev, const ProblemData& problem,
                           const SolverConfig& config) {
  require_same_mesh(hessian.mesh(), u_prev.mesh, "assemble_step");
  require_same_mesh(hessian.mesh(), h_prev.mesh, "assemble_step");
  if (!(problem.tau > 0.0)) throw std::invalid_argument("assemble_step: tau must be positive");
  const Triangulation& mesh = *u_prev.mesh;
  const auto nv = static_cast<Eigen::Index>(mesh.num_vertices());
  const auto nt = static_cast<Eigen::Index>(mesh.num_triangles());

  // Testing A_K : H_K (elementwise constant) with a hat function gives |K|/3 per vertex of K.
  const TensorField a = diffusion_tensor(u_prev, problem.tau, config.gradient_floor);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nt) * 12);
  LinearSystem system;
  system.rhs = load_vector(mesh, problem.f);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const auto kk = static_cast<Index>(k);
    const double third = mesh.area(kk) / 3.0;
    const Mat2 hk = h_prev.at(kk);
    const double relax = third * hk.trace() / problem.tau;
    for (const Index v : mesh.triangle(kk).vertices) {
      for (int c = 0; c < 4; ++c) {
        triplets.emplace_back(v, 4 * k + c, third * a.values[4 * k + c]);
      }
      system.rhs[v] += relax;
    }
  }
  SparseMatrix weights(nv, 4 * nt);
  weights.setFromTriplets(triplets.begin(), triplets.end());
  system.matrix = (weights * hessian.matrix()).pruned();
  system.matrix.makeCompressed();
  return system;
}

LinearSystem assemble_step(const MeshPtr& mesh, const P1Function& u_prev,
                           const TensorField& h_prev, const ProblemData& problem,
                           const SolverConfig& config) {
  return assemble_step(HessianOperator(mesh), u_prev, h_prev, problem, config);
}

void apply_dirichlet(LinearSystem& system, const P1Space& space, const ScalarField& g) {
  const Triangulation& mesh = *space.mesh();
  const auto n = system.matrix.rows();
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (const Index b : space.boundary_dofs()) {
    fixed[static_cast<std::size_t>(b)] = 1;
    values[b] = g(mesh.point(b));
  }

  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(static_cast<std::size_t>(system.matrix.nonZeros()));
  for (Eigen::Index col = 0; col < system.matrix.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.matrix, col); it; ++it) {
      const auto row = it.row();
      if (fixed[static_cast<std::size_t>(row)]) continue;
      if (fixed[static_cast<std::size_t>(col)]) {
        system.rhs[row] -= it.value() * values[col];
      } else {
        kept.emplace_back(row, col, it.value());
      }
    }
  }
  for (const Index b : space.boundary_dofs()) {
    kept.emplace_back(b, b, 1.0);
    system.rhs[b] = values[b];
  }
  system.matrix.setZero();
  system.matrix.setFromTriplets(kept.begin(), kept.end());
  system.matrix.makeCompressed();
}

Eigen::VectorXd solve_linear(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                             const SolverConfig& config) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
    throw std::invalid_argument("solve_linear: system is not square");
  }
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success) {
    throw SolverFailure("sparse LU factorization failed: " + lu.lastErrorMessage(),
                        std::numeric_limits<double>::infinity());
  }
  Eigen::VectorXd x = lu.solve(rhs);
  const double res = relative_residual(matrix, x, rhs);
  if (!(res <= config.linear_solver_tol)) {
    throw SolverFailure("linear solve residual " + std::to_string(res) + " above tolerance", res);
  }
  return x;
}

P1Function default_initializer(const MeshPtr& mesh, const ProblemData& problem,
                               const SolverConfig& config) {
  const auto nv = static_cast<Eigen::Index>(mesh->num_vertices());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh->num_triangles() * 9);
  for (std::size_t k = 0; k < mesh->num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    const auto grads = mesh->basis_gradients(kk);
    const auto& v = mesh->triangle(kk).vertices;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        triplets.emplace_back(v[i], v[j], mesh->area(kk) * grads[i].dot(grads[j]));
      }
    }
  }
  LinearSystem system;
  system.matrix.resize(nv, nv);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  // Weak form of Delta U = f: -int grad U . grad phi = int f phi.
  system.rhs = -load_vector(*mesh, problem.f);
  apply_dirichlet(system, P1Space(mesh), problem.g);

  Eigen::SimplicialLDLT<SparseMatrix> ldlt(system.matrix);
  if (ldlt.info() != Eigen::Success) {
    throw SolverFailure("Poisson initializer: factorization failed",
                        std::numeric_limits<double>::infinity());
  }
  P1Function u{mesh, ldlt.solve(system.rhs)};
  const double res = relative_residual(system.matrix, u.values, system.rhs);
  if (!(res <= config.linear_solver_tol)) {
    throw SolverFailure("Poisson initializer residual " + std::to_string(res) + " above tolerance", res);
  }
  return u;
}

SolveReport fixed_point_solve(const MeshPtr& mesh, const ProblemData& problem,
                              const SolverConfig& config, std::optional<P1Function> initial) {
  if (!(problem.tau > 0.0)) throw std::invalid_argument("fixed_point_solve: tau must be positive");
  if (config.max_iterations < 1) throw std::invalid_argument("fixed_point_solve: max_iterations < 1");
  if (initial) require_same_mesh(mesh, initial->mesh, "fixed_point_solve");

  const P1Space space(mesh);
  const HessianOperator hessian(mesh);
  const double h = mesh->max_diameter();

  SolveReport report;
  report.tolerance = config.increment_tol_factor * h * h;
  P1Function current = initial ? std::move(*initial) : default_initializer(mesh, problem, config);
  P1Function previous = current;

  for (int it = 1; it <= config.max_iterations; ++it) {
    const TensorField h_current = hessian.apply(current);
    LinearSystem system = assemble_step(hessian, current, h_current, problem, config);
    apply_dirichlet(system, space, problem.g);
    Eigen::VectorXd next;
    try {
      next = solve_linear(system.matrix, system.rhs, config);
    } catch (const SolverFailure& e) {
      throw SolverFailure(std::string(e.what()) + " (fixed-point iteration " + std::to_string(it) + ")",
                          e.residual(), it);
    }
    if (!next.allFinite()) {
      throw DivergenceError("non-finite iterate at fixed-point iteration " + std::to_string(it), it);
    }

    previous = std::move(current);
    current = P1Function{mesh, std::move(next)};
    const double increment = l2_norm(P1Function{mesh, current.values - previous.values});
    report.increments.push_back(increment);
    report.iterations = it;
    if (increment <= report.tolerance) {
      report.converged = true;
      break;
    }

    // Sustained growth over five steps means tau is too large for the data.
    const auto& inc = report.increments;
    const std::size_t n = inc.size();
    if (n >= 6) {
      bool growing = true;
      for (std::size_t j = n - 5; j < n; ++j) growing = growing && inc[j] > inc[j - 1];
      if (growing && inc[n - 1] >= 10.0 * inc[n - 6]) {
        throw DivergenceError("fixed-point increments grew tenfold over five iterations at iteration " +
                                  std::to_string(it) + "; try a smaller tau",
                              it);
      }
    }
  }

  report.hessian = hessian.apply(current);
  report.solution = std::move(current);
  report.previous = std::move(previous);
  return report;
}

}  // namespace inflap
