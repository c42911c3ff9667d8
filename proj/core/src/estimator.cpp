#include "inflap/estimator.hpp"

#include <cmath>

#include "inflap/hessian.hpp"
#include "inflap/solver.hpp"

namespace inflap {

namespace {

void check_pair(const P1Function& u_prev, const P1Function& u_next) {
  if (u_prev.mesh.get() != u_next.mesh.get()) {
    throw std::invalid_argument("estimator: iterates live on different meshes");
  }
  if (!(u_prev.mesh)) throw std::invalid_argument("estimator: null mesh");
}

double frobenius(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

double l2_on_triangle(Index k, const Triangulation& mesh, const ScalarField& r) {
  const QuadratureRule& quad = triangle_rule(4);
  const auto p = mesh.corners(k);
  double s = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const double v = r(to_physical(p, quad.points[q]));
    s += quad.weights[q] * v * v;
  }
  return std::sqrt(s * mesh.area(k));
}

}  // namespace

double interior_residual(double f, const Mat2& a_prev, double laplacian_prev,
                         const Mat2& hessian_next, double tau) {
  return f + laplacian_prev / tau - frobenius(a_prev, hessian_next);
}

double interior_residual_norm(Index k, const P1Function& u_prev, const P1Function& u_next,
                              const ScalarField& f, double tau, const EstimatorOptions& options) {
  check_pair(u_prev, u_next);
  const Triangulation& mesh = *u_prev.mesh;
  const Mat2 a = diffusion_tensor(u_prev.gradient(k), tau, options.gradient_floor);
  // Broken second derivatives of P1 functions are zero.
  double lap_prev = 0.0;
  if (options.use_hessian_trace) lap_prev = fe_hessian(u_prev).at(k).trace();
  const Mat2 d2_next = Mat2::Zero();
  return l2_on_triangle(k, mesh, [&](const Vec2& x) {
    return interior_residual(f(x), a, lap_prev, d2_next, tau);
  });
}

double jump_residual(EdgeRef ref, const P1Function& u_prev, const P1Function& u_next, double tau,
                     const EstimatorOptions& options) {
  check_pair(u_prev, u_next);
  if (!ref.interior) throw std::invalid_argument("jump_residual: boundary edge");
  const Triangulation& mesh = *u_prev.mesh;
  const Edge& e = mesh.edge(ref);
  const Index kp = e.adjacent[0];
  const Index km = e.adjacent[1];
  const Vec2 np = e.normal_from_first;
  const Vec2 nm = -np;

  const Vec2 gp_prev = u_prev.gradient(kp);
  const Vec2 gm_prev = u_prev.gradient(km);
  const double normal_jump = gp_prev.dot(np) + gm_prev.dot(nm);
  const Mat2 tensor_jump = u_next.gradient(kp) * np.transpose() + u_next.gradient(km) * nm.transpose();
  const Mat2 a_avg = 0.5 * (diffusion_tensor(gp_prev, tau, options.gradient_floor) +
                            diffusion_tensor(gm_prev, tau, options.gradient_floor));
  return normal_jump / tau - frobenius(a_avg, tensor_jump);
}

IndicatorField estimate(const P1Function& u_prev, const P1Function& u_next, const ScalarField& f,
                        double tau, const EstimatorOptions& options) {
  check_pair(u_prev, u_next);
  if (!(tau > 0.0)) throw std::invalid_argument("estimate: tau must be positive");
  const Triangulation& mesh = *u_prev.mesh;
  const std::size_t nt = mesh.num_triangles();

  IndicatorField out;
  out.mesh = u_prev.mesh;
  out.interior.resize(nt);
  out.jump.resize(mesh.interior_edges().size());
  std::vector<double> eta2(nt, 0.0);

  TensorField h_prev;
  if (options.use_hessian_trace) h_prev = fe_hessian(u_prev);
  const QuadratureRule& quad = triangle_rule(4);

  for (std::size_t k = 0; k < nt; ++k) {
    const auto kk = static_cast<Index>(k);
    const Mat2 a = diffusion_tensor(u_prev.gradient(kk), tau, options.gradient_floor);
    const double lap_prev = options.use_hessian_trace ? h_prev.at(kk).trace() : 0.0;
    const auto p = mesh.corners(kk);
    double s = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double r = interior_residual(f(to_physical(p, quad.points[q])), a, lap_prev, Mat2::Zero(), tau);
      s += quad.weights[q] * r * r;
    }
    const double r_norm = std::sqrt(s * mesh.area(kk));
    const double hk = mesh.diameter(kk);
    out.interior[k] = hk * r_norm;
    eta2[k] = out.interior[k] * out.interior[k];
  }

  for (std::size_t e = 0; e < out.jump.size(); ++e) {
    const Edge& edge = mesh.interior_edges()[e];
    const double he = edge_length(mesh, edge);
    const double j = jump_residual(EdgeRef{true, static_cast<Index>(e)}, u_prev, u_next, tau, options);
    // J is constant along e: ||J||_{L2(e)} = |J| sqrt(h_e).
    out.jump[e] = he * std::abs(j);
    const double share = 0.5 * out.jump[e] * out.jump[e];
    eta2[static_cast<std::size_t>(edge.adjacent[0])] += share;
    eta2[static_cast<std::size_t>(edge.adjacent[1])] += share;
  }

  out.eta.resize(nt);
  double l1 = 0.0;
  double sum_eta2 = 0.0;
  for (std::size_t k = 0; k < nt; ++k) {
    out.eta[k] = std::sqrt(eta2[k]);
    l1 += out.interior[k];
    sum_eta2 += eta2[k];
  }
  for (const double j : out.jump) l1 += j;
  out.global_estimate = l1;
  out.l2_estimate = std::sqrt(sum_eta2);
  return out;
}

}  // namespace inflap
