// Finite element Hessian of a P1 function, projected onto piecewise-constant tensors.
//
// Testing the nonconforming integration-by-parts identity with the indicator of K gives
//
//   H[V]|_K = 1/|K| * ( sum_{interior e of K} |e| avg(grad V)_e (x) n_K,e
//                     + sum_{boundary e of K} |e| grad V|_K (x) n_e ),
//
// since the volume term vanishes against an elementwise constant. The mass matrix of the
// tensor space is diagonal, so H[V] is an explicit sparse linear map of the vertex values.

#ifndef INFLAP_HESSIAN_HPP
#define INFLAP_HESSIAN_HPP

#include <Eigen/SparseCore>

#include "inflap/fespace.hpp"

namespace inflap {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Elementwise evaluation from the gradients of V on each triangle and its edge neighbours.
TensorField fe_hessian(const P1Function& v);

/// Sparse map from P1 coefficients (one per vertex) to tensor coefficients (four per triangle).
class HessianOperator {
 public:
  HessianOperator() = default;
  explicit HessianOperator(MeshPtr mesh);

  const MeshPtr& mesh() const { return mesh_; }
  /// Rows are 4*k + (2*r + c); columns are vertex ids.
  const SparseMatrix& matrix() const { return matrix_; }

  TensorField apply(const Eigen::VectorXd& coefficients) const;
  TensorField apply(const P1Function& v) const;

 private:
  MeshPtr mesh_;
  SparseMatrix matrix_;
};

inline HessianOperator hessian_operator(MeshPtr mesh) { return HessianOperator(std::move(mesh)); }

}  // namespace inflap

#endif  // INFLAP_HESSIAN_HPP
