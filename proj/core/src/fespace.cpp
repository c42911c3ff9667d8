#include "inflap/fespace.hpp"

#include <cmath>
#include <string>

namespace inflap {

namespace {

void require_error_rule(const QuadratureRule& quad) {
  if (quad.order < 6) {
    throw std::invalid_argument("error norms need a quadrature rule of order >= 6");
  }
}

}  // namespace

P1Space::P1Space(MeshPtr mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw std::invalid_argument("P1Space: null mesh");
  const auto verts = mesh_->vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (verts[v].on_boundary) boundary_dofs_.push_back(static_cast<Index>(v));
  }
}

P1Function P1Function::zeros(MeshPtr mesh) {
  const auto n = static_cast<Eigen::Index>(mesh->num_vertices());
  return P1Function{std::move(mesh), Eigen::VectorXd::Zero(n)};
}

Vec2 P1Function::gradient(Index k) const {
  const auto grads = mesh->basis_gradients(k);
  const auto& v = mesh->triangle(k).vertices;
  return values[v[0]] * grads[0] + values[v[1]] * grads[1] + values[v[2]] * grads[2];
}

double P1Function::evaluate(Index k, const std::array<double, 3>& b) const {
  const auto& v = mesh->triangle(k).vertices;
  return b[0] * values[v[0]] + b[1] * values[v[1]] + b[2] * values[v[2]];
}

TensorField TensorField::zeros(MeshPtr mesh) {
  const auto n = static_cast<Eigen::Index>(4 * mesh->num_triangles());
  return TensorField{std::move(mesh), Eigen::VectorXd::Zero(n)};
}

Mat2 TensorField::at(Index k) const {
  const auto o = 4 * static_cast<Eigen::Index>(k);
  Mat2 m;
  m << values[o], values[o + 1], values[o + 2], values[o + 3];
  return m;
}

void TensorField::set(Index k, const Mat2& m) {
  const auto o = 4 * static_cast<Eigen::Index>(k);
  values[o] = m(0, 0);
  values[o + 1] = m(0, 1);
  values[o + 2] = m(1, 0);
  values[o + 3] = m(1, 1);
}

Vec2 to_physical(const std::array<Vec2, 3>& p, const std::array<double, 3>& b) {
  return b[0] * p[0] + b[1] * p[1] + b[2] * p[2];
}

P1Function interpolate(MeshPtr mesh, const ScalarField& g) {
  P1Function u = P1Function::zeros(mesh);
  const auto verts = mesh->vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const double value = g(verts[v].x);
    if (!std::isfinite(value)) {
      throw EvaluationError("interpolate: non-finite value at vertex " + std::to_string(v));
    }
    u.values[static_cast<Eigen::Index>(v)] = value;
  }
  return u;
}

double integrate(const Triangulation& mesh, const ScalarField& f, const QuadratureRule& quad) {
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto p = mesh.corners(static_cast<Index>(k));
    double local = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) local += quad.weights[q] * f(to_physical(p, quad.points[q]));
    total += local * mesh.area(static_cast<Index>(k));
  }
  return total;
}

double l2_error(const P1Function& u, const ScalarField& exact, const QuadratureRule& quad) {
  require_error_rule(quad);
  const Triangulation& mesh = *u.mesh;
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    const auto p = mesh.corners(kk);
    double local = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double d = u.evaluate(kk, quad.points[q]) - exact(to_physical(p, quad.points[q]));
      local += quad.weights[q] * d * d;
    }
    total += local * mesh.area(kk);
  }
  return std::sqrt(total);
}

double h1_semi_error(const P1Function& u, const VectorField& exact_gradient,
                     const QuadratureRule& quad) {
  require_error_rule(quad);
  const Triangulation& mesh = *u.mesh;
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    const auto p = mesh.corners(kk);
    const Vec2 grad = u.gradient(kk);
    double local = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      local += quad.weights[q] * (grad - exact_gradient(to_physical(p, quad.points[q]))).squaredNorm();
    }
    total += local * mesh.area(kk);
  }
  return std::sqrt(total);
}

double l2_norm(const P1Function& u) {
  const Triangulation& mesh = *u.mesh;
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto& v = mesh.triangles()[k].vertices;
    const double a = u.values[v[0]], b = u.values[v[1]], c = u.values[v[2]];
    const double s = a + b + c;
    total += mesh.area(static_cast<Index>(k)) / 12.0 * (a * a + b * b + c * c + s * s);
  }
  return std::sqrt(total);
}

}  // namespace inflap
