#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "inflap/fespace.hpp"
#include "inflap/problems.hpp"
#include "oracles.hpp"

using namespace inflap;

namespace {

MeshPtr share(Triangulation t) { return std::make_shared<const Triangulation>(std::move(t)); }

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_SUITE("fespace") {

TEST_CASE("quadrature integrates monomials exactly on the reference triangle") {
  for (int order : {1, 2, 4, 6}) {
    const QuadratureRule& q = triangle_rule(order);
    CHECK(q.order >= order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
          s += q.weights[i] * std::pow(q.points[i][1], a) * std::pow(q.points[i][2], b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK(std::abs(0.5 * s - exact) <= 1e-14);
      }
    }
  }
  CHECK(triangle_rule(3).order >= 3);
  CHECK_THROWS_AS(triangle_rule(7), std::invalid_argument);
}

TEST_CASE("interpolation examples") {
  const MeshPtr m = share(build_initial_mesh(2));
  const P1Function u = interpolate(m, [](const Vec2& x) { return x.squaredNorm(); });
  for (std::size_t v = 0; v < m->num_vertices(); ++v) {
    CHECK(u.values[static_cast<Eigen::Index>(v)] == m->vertices()[v].x.squaredNorm());
    if (m->vertices()[v].x == Vec2(1, 1)) CHECK(u.values[static_cast<Eigen::Index>(v)] == 2.0);
  }
  CHECK(interpolate(m, [](const Vec2&) { return 0.0; }).values.isZero(0.0));

  const ScalarField g = aronsson_problem().data.g;
  CHECK(g(Vec2(1, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g(Vec2(1, 1)) == 0.0);
  const P1Function a = interpolate(m, g);
  for (std::size_t v = 0; v < m->num_vertices(); ++v) {
    const Vec2 x = m->vertices()[v].x;
    CHECK(a.values[static_cast<Eigen::Index>(v)] ==
          doctest::Approx(std::pow(std::abs(x.x()), 4.0 / 3.0) - std::pow(std::abs(x.y()), 4.0 / 3.0)));
  }
}

TEST_CASE("interpolation rejects non-finite data") {
  const MeshPtr m = share(build_initial_mesh(1));
  CHECK_THROWS_AS(interpolate(m, [](const Vec2& x) { return 1.0 / x.norm(); }), EvaluationError);
  CHECK_THROWS_AS(interpolate(m, [](const Vec2&) { return std::numeric_limits<double>::quiet_NaN(); }),
                  EvaluationError);
}

TEST_CASE("affine functions are reproduced at quadrature points") {
  Triangulation t = build_initial_mesh(2);
  const std::vector<Index> marked{1, 6};
  const MeshPtr m = share(refine(t, marked));
  auto g = [](const Vec2& x) { return 0.25 - 3.0 * x.x() + 1.5 * x.y(); };
  const P1Function u = interpolate(m, g);
  const QuadratureRule& q = triangle_rule(6);
  for (std::size_t k = 0; k < m->num_triangles(); ++k) {
    const auto kk = static_cast<Index>(k);
    for (const auto& b : q.points) CHECK(std::abs(u.evaluate(kk, b) - g(to_physical(m->corners(kk), b))) <= 1e-13);
    CHECK((u.gradient(kk) - Vec2(-3.0, 1.5)).norm() <= 1e-13);
  }
  CHECK(l2_error(u, g) <= 1e-12);
  CHECK(h1_semi_error(u, [](const Vec2&) { return Vec2(-3.0, 1.5); }) <= 1e-12);
}

TEST_CASE("gradients") {
  const MeshPtr m = share(build_initial_mesh(1));
  const P1Function ux = interpolate(m, [](const Vec2& x) { return x.x(); });
  const P1Function c = interpolate(m, [](const Vec2&) { return 3.0; });
  for (Index k = 0; k < 4; ++k) {
    CHECK((gradient(ux, k) - Vec2(1, 0)).norm() < 1e-15);
    CHECK(gradient(c, k).norm() < 1e-15);
  }

  const P1Function q = interpolate(m, [](const Vec2& x) { return x.squaredNorm(); });
  bool found = false;
  for (Index k = 0; k < 4; ++k) {
    const auto p = m->corners(k);
    bool has_bottom = false;
    for (const Vec2& x : p) has_bottom = has_bottom || x == Vec2(-1, -1);
    bool has_right = false;
    for (const Vec2& x : p) has_right = has_right || x == Vec2(1, -1);
    if (!(has_bottom && has_right)) continue;
    found = true;
    // Values 2, 2, 0 at (-1,-1), (1,-1), (0,0); the plane through them is -2y.
    const Vec2 expected = oracle::affine_gradient({Vec2(-1, -1), Vec2(1, -1), Vec2(0, 0)}, {2.0, 2.0, 0.0});
    CHECK((q.gradient(k) - expected).norm() < 1e-14);
    CHECK((expected - Vec2(0, -2)).norm() < 1e-14);
  }
  CHECK(found);
}

TEST_CASE("integration") {
  const Triangulation m = build_initial_mesh(3);
  CHECK(integrate(m, [](const Vec2&) { return 1.0; }) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(std::abs(integrate(m, [](const Vec2& x) { return x.x(); })) < 1e-14);
  CHECK(integrate(m, [](const Vec2& x) { return x.x() * x.x(); }) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("error norms") {
  const MeshPtr m2 = share(build_initial_mesh(2));
  const P1Function zero = P1Function::zeros(m2);
  CHECK(l2_error(zero, [](const Vec2&) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(l2_error(zero, [](const Vec2&) { return 1.0; }, triangle_rule(4)), std::invalid_argument);
  CHECK_THROWS_AS(h1_semi_error(zero, [](const Vec2&) { return Vec2(0, 0); }, triangle_rule(2)),
                  std::invalid_argument);

  auto q = [](const Vec2& x) { return x.squaredNorm(); };
  const P1Function u = interpolate(m2, q);
  double oracle_sq = 0.0;
  for (std::size_t k = 0; k < m2->num_triangles(); ++k) {
    const auto p = oracle::corners(*m2, static_cast<Index>(k));
    const auto& v = m2->triangles()[k].vertices;
    const Vec2 grad = oracle::affine_gradient(p, {u.values[v[0]], u.values[v[1]], u.values[v[2]]});
    oracle_sq += oracle::integrate_triangle(p, [&](const Vec2& x) {
      const double uh = u.values[v[0]] + grad.dot(x - p[0]);
      return (uh - q(x)) * (uh - q(x));
    });
  }
  CHECK(std::abs(l2_error(u, q) - std::sqrt(oracle_sq)) <= 1e-10);
}

TEST_CASE("error norms are absolutely homogeneous") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const MeshPtr m = share(build_initial_mesh(3));
  P1Function u = P1Function::zeros(m);
  for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = dist(rng);
  const ScalarField zero = [](const Vec2&) { return 0.0; };
  const VectorField zero_grad = [](const Vec2&) { return Vec2(0, 0); };
  for (double c : {-2.5, 0.0, 0.5, 3.0}) {
    const P1Function cu{m, c * u.values};
    CHECK(l2_error(cu, zero) == doctest::Approx(std::abs(c) * l2_error(u, zero)).epsilon(1e-13));
    CHECK(h1_semi_error(cu, zero_grad) == doctest::Approx(std::abs(c) * h1_semi_error(u, zero_grad)).epsilon(1e-13));
  }
  CHECK(l2_norm(u) == doctest::Approx(l2_error(u, zero)).epsilon(1e-13));
}

TEST_CASE("tensor field storage is row-major") {
  const MeshPtr m = share(build_initial_mesh(1));
  TensorField t = TensorField::zeros(m);
  CHECK(t.dof_count() == 16);
  Mat2 a;
  a << 1, 2, 3, 4;
  t.set(2, a);
  CHECK(t.values[8] == 1);
  CHECK(t.values[9] == 2);
  CHECK(t.values[10] == 3);
  CHECK(t.values[11] == 4);
  CHECK(t.at(2) == a);
}

TEST_CASE("boundary dofs are exactly the vertices on the square's boundary") {
  const MeshPtr m = share(build_initial_mesh(3));
  const P1Space space(m);
  CHECK(space.dof_count() == m->num_vertices());
  std::size_t expected = 0;
  for (const Vertex& v : m->vertices()) {
    expected += (std::abs(std::abs(v.x.x()) - 1.0) < 1e-14 || std::abs(std::abs(v.x.y()) - 1.0) < 1e-14) ? 1 : 0;
  }
  CHECK(space.boundary_dofs().size() == expected);
  CHECK(expected == 12);
}

}  // TEST_SUITE
