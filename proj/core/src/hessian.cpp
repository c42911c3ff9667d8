#include "inflap/hessian.hpp"

#include <vector>

namespace inflap {

TensorField fe_hessian(const P1Function& v) {
  const Triangulation& mesh = *v.mesh;
  TensorField h = TensorField::zeros(v.mesh);
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    const Vec2 own = v.gradient(kk);
    Mat2 sum = Mat2::Zero();
    for (int i = 0; i < 3; ++i) {
      const Index nb = mesh.neighbor(kk, i);
      const Vec2 flux = nb == kNone ? own : Vec2(0.5 * (own + v.gradient(nb)));
      sum += mesh.side_length(kk, i) * flux * mesh.outward_normal(kk, i).transpose();
    }
    h.set(kk, sum / mesh.area(kk));
  }
  return h;
}

HessianOperator::HessianOperator(MeshPtr mesh) : mesh_(std::move(mesh)) {
  const Triangulation& m = *mesh_;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(m.num_triangles() * 4 * 12);

  auto add_gradient_outer = [&](Index row_block, Index tri, double weight, const Vec2& n) {
    const auto grads = m.basis_gradients(tri);
    const auto& verts = m.triangle(tri).vertices;
    for (int j = 0; j < 3; ++j) {
      const Mat2 outer = weight * grads[j] * n.transpose();
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          triplets.emplace_back(4 * row_block + 2 * r + c, verts[j], outer(r, c));
        }
      }
    }
  };

  for (std::size_t k = 0; k < m.num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    for (int i = 0; i < 3; ++i) {
      const double w = m.side_length(kk, i) / m.area(kk);
      const Vec2 n = m.outward_normal(kk, i);
      const Index nb = m.neighbor(kk, i);
      if (nb == kNone) {
        add_gradient_outer(kk, kk, w, n);
      } else {
        add_gradient_outer(kk, kk, 0.5 * w, n);
        add_gradient_outer(kk, nb, 0.5 * w, n);
      }
    }
  }
  matrix_.resize(static_cast<Eigen::Index>(4 * m.num_triangles()),
                 static_cast<Eigen::Index>(m.num_vertices()));
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
}

TensorField HessianOperator::apply(const Eigen::VectorXd& coefficients) const {
  return TensorField{mesh_, matrix_ * coefficients};
}

TensorField HessianOperator::apply(const P1Function& v) const {
  if (v.mesh.get() != mesh_.get()) {
    throw std::invalid_argument("HessianOperator::apply: function lives on a different mesh");
  }
  return apply(v.values);
}

}  // namespace inflap
