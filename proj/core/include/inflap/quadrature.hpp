// Symmetric quadrature rules on triangles.

#ifndef INFLAP_QUADRATURE_HPP
#define INFLAP_QUADRATURE_HPP

#include <array>
#include <vector>

namespace inflap {

/// Weights sum to one; multiply by the element area when integrating.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // barycentric
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return weights.size(); }
};

/// Smallest tabulated rule exact for polynomials of total degree `order` (supported up to 6).
const QuadratureRule& triangle_rule(int order);

}  // namespace inflap

#endif  // INFLAP_QUADRATURE_HPP
