#include "inflap/quadrature.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace inflap {

namespace {

void add_s3(QuadratureRule& q, double w) {
  q.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  q.weights.push_back(w);
}

void add_s21(QuadratureRule& q, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : {std::array<double, 3>{a, a, b}, {a, b, a}, {b, a, a}}) {
    q.points.push_back(p);
    q.weights.push_back(w);
  }
}

void add_s111(QuadratureRule& q, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array<double, 3>{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a},
                        {c, a, b}, {c, b, a}}) {
    q.points.push_back(p);
    q.weights.push_back(w);
  }
}

QuadratureRule make_order1() {
  QuadratureRule q;
  q.order = 1;
  add_s3(q, 1.0);
  return q;
}

QuadratureRule make_order2() {
  QuadratureRule q;
  q.order = 2;
  add_s21(q, 1.0 / 6.0, 1.0 / 3.0);
  return q;
}

// Dunavant degree-4, 6 points.
QuadratureRule make_order4() {
  QuadratureRule q;
  q.order = 4;
  add_s21(q, 0.44594849091596488632, 0.22338158967801146570);
  add_s21(q, 0.09157621350977074346, 0.10995174365532186764);
  return q;
}

// Dunavant degree-6, 12 points.
QuadratureRule make_order6() {
  QuadratureRule q;
  q.order = 6;
  add_s21(q, 0.06308901449150222834, 0.050844906370206816921);
  add_s21(q, 0.24928674517091042129, 0.11678627572637936603);
  add_s111(q, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
  return q;
}

}  // namespace

const QuadratureRule& triangle_rule(int order) {
  static const QuadratureRule r1 = make_order1();
  static const QuadratureRule r2 = make_order2();
  static const QuadratureRule r4 = make_order4();
  static const QuadratureRule r6 = make_order6();
  if (order < 0 || order > 6) {
    throw std::invalid_argument("no triangle rule of order " + std::to_string(order));
  }
  if (order <= 1) return r1;
  if (order == 2) return r2;
  if (order <= 4) return r4;
  return r6;
}

}  // namespace inflap
