#include "inflap/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "inflap/estimator.hpp"
#include "inflap/hessian.hpp"
#include "inflap/problems.hpp"
#include "inflap/solver.hpp"

namespace inflap {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

MeshPtr share(Triangulation t) { return std::make_shared<const Triangulation>(std::move(t)); }

std::vector<MeshPtr> sample_meshes(std::mt19937& rng) {
  std::vector<MeshPtr> meshes{share(build_initial_mesh(1)), share(build_initial_mesh(3))};
  Triangulation m = build_initial_mesh(2);
  for (int step = 0; step < 6; ++step) {
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(m.num_triangles()) - 1);
    const std::vector<Index> marked{pick(rng), pick(rng)};
    m = refine(m, marked);
  }
  meshes.push_back(share(std::move(m)));
  return meshes;
}

P1Function random_function(const MeshPtr& mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  P1Function v = P1Function::zeros(mesh);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) v.values[i] = dist(rng);
  return v;
}

}  // namespace

Mat2 boundary_gradient_flux(const P1Function& v) {
  const Triangulation& mesh = *v.mesh;
  Mat2 total = Mat2::Zero();
  for (const Edge& e : mesh.boundary_edges()) {
    total += edge_length(mesh, e) * v.gradient(e.adjacent[0]) * e.normal_from_first.transpose();
  }
  return total;
}

std::vector<CheckResult> run_invariant_checks(unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<CheckResult> results;
  const auto meshes = sample_meshes(rng);

  {
    CheckResult r{"mesh conformity and coverage", true, ""};
    for (const auto& m : meshes) {
      const auto problems = validate(*m);
      if (!problems.empty()) {
        r.passed = false;
        r.detail = problems.front();
      }
    }
    results.push_back(r);
  }
  {
    double worst = 180.0;
    for (const auto& m : meshes) worst = std::min(worst, min_angle_degrees(*m));
    results.push_back({"minimum angle >= 22.5 degrees", worst >= 22.5 - 1e-9, "min angle " + fmt(worst)});
  }
  {
    double worst = 0.0;
    for (int order : {1, 2, 4, 6}) {
      const QuadratureRule& q = triangle_rule(order);
      double wsum = 0.0;
      for (double w : q.weights) wsum += w;
      worst = std::max(worst, std::abs(wsum - 1.0));
    }
    results.push_back({"quadrature weights sum to one", worst <= 1e-14, "max deviation " + fmt(worst)});
  }
  {
    double worst = 0.0;
    for (const auto& m : meshes) {
      const P1Function v = interpolate(m, [](const Vec2& x) { return 0.3 - 1.7 * x.x() + 2.2 * x.y(); });
      worst = std::max(worst, fe_hessian(v).values.cwiseAbs().maxCoeff());
    }
    results.push_back({"finite element Hessian of affine data vanishes", worst <= 1e-12, "max |H| " + fmt(worst)});
  }
  {
    double worst = 0.0;
    for (const auto& m : meshes) {
      const P1Function v = random_function(m, rng);
      const TensorField h = fe_hessian(v);
      Mat2 lhs = Mat2::Zero();
      for (std::size_t k = 0; k < m->num_triangles(); ++k) {
        lhs += m->area(static_cast<Index>(k)) * h.at(static_cast<Index>(k));
      }
      worst = std::max(worst, (lhs - boundary_gradient_flux(v)).cwiseAbs().maxCoeff());
    }
    results.push_back({"Hessian global consistency identity", worst <= 1e-12, "max deviation " + fmt(worst)});
  }
  {
    double worst = 0.0;
    for (const auto& m : meshes) {
      const P1Function v = random_function(m, rng);
      const Eigen::VectorXd diff = HessianOperator(m).apply(v).values - fe_hessian(v).values;
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    results.push_back({"Hessian operator matches elementwise evaluation", worst <= 1e-12, "max deviation " + fmt(worst)});
  }
  {
    const double tau = 1.0;
    bool ok = true;
    for (const auto& m : meshes) {
      const TensorField a = diffusion_tensor(random_function(m, rng), tau, 1e-10);
      for (std::size_t k = 0; k < m->num_triangles(); ++k) {
        const Mat2 ak = a.at(static_cast<Index>(k));
        const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(ak).eigenvalues();
        ok = ok && (ak - ak.transpose()).norm() == 0.0 && ev.minCoeff() >= 1.0 / tau - 1e-12 &&
             ev.maxCoeff() <= 1.0 + 1.0 / tau + 1e-12;
      }
    }
    results.push_back({"diffusion tensor eigenvalues in [1/tau, 1 + 1/tau]", ok, ""});
  }
  {
    double worst = 0.0;
    for (const auto& m : meshes) {
      const P1Function u = interpolate(m, [](const Vec2& x) { return 1.0 + x.x() - 0.5 * x.y(); });
      const IndicatorField ind = estimate(u, u, [](const Vec2&) { return 0.0; }, 1.0);
      worst = std::max(worst, ind.global_estimate);
    }
    results.push_back({"estimator vanishes for affine data and f = 0", worst <= 1e-12, "estimate " + fmt(worst)});
  }
  {
    const MeshPtr m = meshes[1];
    const ProblemData data = classical_problem().data;
    const SolveReport rep = fixed_point_solve(m, data, SolverConfig{});
    double worst = 0.0;
    const P1Space space(m);
    for (const Index b : space.boundary_dofs()) {
      worst = std::max(worst, std::abs(rep.solution.values[b] - data.g(m->point(b))));
    }
    results.push_back({"solver reproduces Dirichlet data", rep.converged && worst == 0.0,
                       std::to_string(rep.iterations) + " iterations"});
  }
  return results;
}

}  // namespace inflap
