// Benchmark problems with known solutions on [-1,1]^2.

#ifndef INFLAP_PROBLEMS_HPP
#define INFLAP_PROBLEMS_HPP

#include <map>
#include <string>

#include "inflap/solver.hpp"

namespace inflap {

struct BenchmarkProblem {
  std::string name;
  ProblemData data;
  std::string description;
};

/// f = 2, g = u = |x|^2, tau = 1000.
BenchmarkProblem classical_problem();
/// f = 0, g = u = |x|^{4/3} - |y|^{4/3} (Aronsson), tau = 1.
BenchmarkProblem aronsson_problem();

const std::map<std::string, BenchmarkProblem>& registry();
/// Throws std::out_of_range for unknown names.
const BenchmarkProblem& find_problem(const std::string& name);

}  // namespace inflap

#endif  // INFLAP_PROBLEMS_HPP
