// Residual a posteriori indicators for one linearisation step U^n -> U^{n+1}.

#ifndef INFLAP_ESTIMATOR_HPP
#define INFLAP_ESTIMATOR_HPP

#include <vector>

#include "inflap/fespace.hpp"

namespace inflap {

struct EstimatorOptions {
  double gradient_floor = 1e-10;
  /// Replace the broken Laplacian of U^n in the interior residual by tr H[U^n].
  bool use_hessian_trace = false;
};

struct IndicatorField {
  MeshPtr mesh;
  /// Marking indicator per triangle: eta_K^2 = h_K^2 ||R||_K^2 + 1/2 sum_{e in dK} h_e ||J||_e^2.
  std::vector<double> eta;
  /// h_K ||R||_{L2(K)} per triangle.
  std::vector<double> interior;
  /// h_e^{1/2} ||J||_{L2(e)} per interior edge.
  std::vector<double> jump;
  /// Sum of all interior and jump parts (l1 aggregate, constant taken as one).
  double global_estimate = 0.0;
  /// sqrt(sum_K eta_K^2); this is the aggregate that scales like the error.
  double l2_estimate = 0.0;
};

/// Pointwise interior residual f + lap(U^n)/tau - A[U^n] : D^2 U^{n+1} from broken derivatives.
double interior_residual(double f, const Mat2& a_prev, double laplacian_prev,
                         const Mat2& hessian_next, double tau);

/// ||R||_{L2(K)} for P1 iterates (broken second derivatives vanish), order-4 quadrature.
double interior_residual_norm(Index k, const P1Function& u_prev, const P1Function& u_next,
                              const ScalarField& f, double tau,
                              const EstimatorOptions& options = {});

/// Constant value of the jump residual on an interior edge. Throws for boundary edges.
double jump_residual(EdgeRef edge, const P1Function& u_prev, const P1Function& u_next, double tau,
                     const EstimatorOptions& options = {});

IndicatorField estimate(const P1Function& u_prev, const P1Function& u_next, const ScalarField& f,
                        double tau, const EstimatorOptions& options = {});

}  // namespace inflap

#endif  // INFLAP_ESTIMATOR_HPP
