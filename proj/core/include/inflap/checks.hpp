// Self-contained invariant checks on small meshes, used by `inflap check`.

#ifndef INFLAP_CHECKS_HPP
#define INFLAP_CHECKS_HPP

#include <string>
#include <vector>

#include "inflap/fespace.hpp"

namespace inflap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// sum_{e on boundary} |e| grad V|_K (x) n_e; equals sum_K |K| H[V]|_K.
Mat2 boundary_gradient_flux(const P1Function& v);

std::vector<CheckResult> run_invariant_checks(unsigned seed = 20240601u);

}  // namespace inflap

#endif  // INFLAP_CHECKS_HPP
