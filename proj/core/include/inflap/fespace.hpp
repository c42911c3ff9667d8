// Continuous P1 and piecewise-constant tensor spaces on a Triangulation.

#ifndef INFLAP_FESPACE_HPP
#define INFLAP_FESPACE_HPP

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "inflap/mesh.hpp"
#include "inflap/quadrature.hpp"

namespace inflap {

using MeshPtr = std::shared_ptr<const Triangulation>;
using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuous piecewise-linear Lagrange space; one dof per vertex.
class P1Space {
 public:
  explicit P1Space(MeshPtr mesh);

  const MeshPtr& mesh() const { return mesh_; }
  std::size_t dof_count() const { return mesh_->num_vertices(); }
  const std::vector<Index>& boundary_dofs() const { return boundary_dofs_; }

 private:
  MeshPtr mesh_;
  std::vector<Index> boundary_dofs_;
};

struct P1Function {
  MeshPtr mesh;
  Eigen::VectorXd values;

  static P1Function zeros(MeshPtr mesh);
  /// Constant gradient on triangle k.
  Vec2 gradient(Index k) const;
  double evaluate(Index k, const std::array<double, 3>& barycentric) const;
};

/// One constant 2x2 matrix per triangle, stored row-major (A11, A12, A21, A22).
struct TensorField {
  MeshPtr mesh;
  Eigen::VectorXd values;

  static TensorField zeros(MeshPtr mesh);
  Mat2 at(Index k) const;
  void set(Index k, const Mat2& m);
  std::size_t dof_count() const { return static_cast<std::size_t>(values.size()); }
};

Vec2 to_physical(const std::array<Vec2, 3>& corners, const std::array<double, 3>& barycentric);

/// Lagrange interpolant. Throws EvaluationError on a non-finite vertex value.
P1Function interpolate(MeshPtr mesh, const ScalarField& g);

inline Vec2 gradient(const P1Function& u, Index k) { return u.gradient(k); }

double integrate(const Triangulation& mesh, const ScalarField& f,
                 const QuadratureRule& quad = triangle_rule(6));

/// ||u - exact||_{L2}; the rule must have order >= 6.
double l2_error(const P1Function& u, const ScalarField& exact,
                const QuadratureRule& quad = triangle_rule(6));
/// |u - exact|_{H1}; the rule must have order >= 6.
double h1_semi_error(const P1Function& u, const VectorField& exact_gradient,
                     const QuadratureRule& quad = triangle_rule(6));

/// Exact L2 norm of a P1 function (element mass matrices).
double l2_norm(const P1Function& u);

}  // namespace inflap

#endif  // INFLAP_FESPACE_HPP
