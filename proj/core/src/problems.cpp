#include "inflap/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace inflap {

BenchmarkProblem classical_problem() {
  BenchmarkProblem p;
  p.name = "classical";
  p.description = "smooth solution u = |x|^2 of the inhomogeneous problem with f = 2";
  p.data.f = [](const Vec2&) { return 2.0; };
  p.data.g = [](const Vec2& x) { return x.squaredNorm(); };
  p.data.exact_solution = p.data.g;
  p.data.exact_gradient = [](const Vec2& x) -> Vec2 { return 2.0 * x; };
  p.data.tau = 1000.0;
  return p;
}

BenchmarkProblem aronsson_problem() {
  BenchmarkProblem p;
  p.name = "aronsson";
  p.description = "C^{1,1/3} Aronsson solution u = |x|^{4/3} - |y|^{4/3} of the homogeneous problem";
  p.data.f = [](const Vec2&) { return 0.0; };
  p.data.g = [](const Vec2& x) {
    return std::pow(std::abs(x.x()), 4.0 / 3.0) - std::pow(std::abs(x.y()), 4.0 / 3.0);
  };
  p.data.exact_solution = p.data.g;
  // (4/3) sign(t) |t|^{1/3} = (4/3) cbrt(t); zero on the axes.
  p.data.exact_gradient = [](const Vec2& x) -> Vec2 {
    return Vec2(4.0 / 3.0 * std::cbrt(x.x()), -4.0 / 3.0 * std::cbrt(x.y()));
  };
  p.data.tau = 1.0;
  return p;
}

const std::map<std::string, BenchmarkProblem>& registry() {
  static const std::map<std::string, BenchmarkProblem> problems = [] {
    std::map<std::string, BenchmarkProblem> m;
    for (auto p : {classical_problem(), aronsson_problem()}) m.emplace(p.name, std::move(p));
    return m;
  }();
  return problems;
}

const BenchmarkProblem& find_problem(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw std::out_of_range("unknown problem '" + name + "'");
  return it->second;
}

}  // namespace inflap
