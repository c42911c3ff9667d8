// inflap: command-line driver for uniform convergence studies, adaptive runs and self-checks.
//
//   inflap solve --problem classical --levels 5 --tau 1000
//   inflap adapt --problem aronsson --tol 0.1 --theta 0.5 --tau 0.1
//   inflap check
//
// Exit status: 0 success, 1 solver failure, 2 bad arguments.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "inflap/adapt.hpp"
#include "inflap/checks.hpp"
#include "inflap/convergence.hpp"
#include "inflap/io.hpp"
#include "inflap/problems.hpp"

namespace fs = std::filesystem;
using namespace inflap;

namespace {

constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("INFLAP_OUT"); env && *env) return env;
  return ".";
}

void print_table(const EOCTable& table) {
  auto opt = [](const std::optional<double>& v) {
    std::ostringstream os;
    if (v) os << std::fixed << std::setprecision(3) << *v;
    else os << "-";
    return os.str();
  };
  std::cout << std::setw(5) << "level" << std::setw(10) << "dofs" << std::setw(12) << "h" << std::setw(13)
            << "L2 error" << std::setw(7) << "eoc" << std::setw(13) << "H1 error" << std::setw(7) << "eoc"
            << std::setw(13) << "estimator" << std::setw(7) << "eoc" << std::setw(6) << "its" << '\n';
  for (const EOCRow& r : table.rows) {
    std::cout << std::setw(5) << r.level << std::setw(10) << r.dofs << std::setw(12) << std::setprecision(4)
              << r.h << std::scientific << std::setprecision(4) << std::setw(13) << r.l2_error
              << std::setw(7) << opt(r.l2_eoc) << std::setw(13) << r.h1_error << std::setw(7) << opt(r.h1_eoc)
              << std::setw(13) << r.estimator << std::setw(7) << opt(r.estimator_eoc) << std::defaultfloat
              << std::setw(6) << r.iterations << '\n';
  }
}

struct SolveArgs {
  std::string problem;
  int levels = 5;
  std::optional<double> tau;
  double tol_factor = 10.0;
  int max_iters = 100;
  std::string out;
  bool hessian_trace = false;
};

struct AdaptArgs {
  std::string problem;
  double tol = 0.1;
  double theta = 0.5;
  double tau = 0.1;
  int max_cycles = 30;
  std::size_t dof_budget = 200000;
  double tol_factor = 10.0;
  int max_iters = 100;
  std::string out;
  bool hessian_trace = false;
};

int run_solve(const SolveArgs& args) {
  const BenchmarkProblem& problem = find_problem(args.problem);
  const double tau = args.tau.value_or(problem.data.tau);
  const fs::path dir = output_dir(args.out);
  fs::create_directories(dir);

  SolverConfig config;
  config.increment_tol_factor = args.tol_factor;
  config.max_iterations = args.max_iters;
  StudyOptions options;
  options.estimator.use_hessian_trace = args.hessian_trace;
  options.on_level = [&](const LevelResult& level) {
    const SolveReport& rep = *level.report;
    const std::vector<VtuField> fields{
        point_field("solution", rep.solution),
        point_field("exact", interpolate(level.mesh, problem.data.exact_solution)),
        cell_field("hessian", rep.hessian),
        cell_field("indicator", level.indicators->eta),
    };
    write_vtu(*level.mesh, fields, dir / (problem.name + "_level" + std::to_string(level.level) + ".vtu"));
    if (!rep.converged) {
      std::cerr << "warning: level " << level.level << " stopped after " << rep.iterations
                << " iterations without meeting the increment tolerance\n";
    }
  };

  std::cout << "problem " << problem.name << ", tau = " << tau << ", " << args.levels << " levels\n";
  EOCTable table;
  try {
    table = convergence_study(problem.data, args.levels, tau, config, options);
  } catch (const StudyFailure& e) {
    write_csv(e.partial(), dir / (problem.name + "_eoc.csv"));
    print_table(e.partial());
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  const fs::path csv = dir / (problem.name + "_eoc.csv");
  write_csv(table, csv);
  print_table(table);
  std::cout << "wrote " << csv.string() << '\n';
  return 0;
}

int run_adapt(const AdaptArgs& args) {
  const BenchmarkProblem& problem = find_problem(args.problem);
  const fs::path dir = output_dir(args.out);
  fs::create_directories(dir);

  AdaptiveConfig config;
  config.theta = args.theta;
  config.estimator_tol = args.tol;
  config.tau = args.tau;
  config.max_cycles = args.max_cycles;
  config.dof_budget = args.dof_budget;
  config.solver.increment_tol_factor = args.tol_factor;
  config.solver.max_iterations = args.max_iters;
  config.estimator.use_hessian_trace = args.hessian_trace;

  auto mesh = std::make_shared<const Triangulation>(build_initial_mesh(4));
  AdaptiveResult result;
  try {
    result = adaptive_solve(problem.data, mesh, config);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }

  const fs::path csv = dir / (problem.name + "_adapt_history.csv");
  write_csv(result.history, csv);
  const std::vector<VtuField> fields{
      point_field("solution", result.report.solution),
      cell_field("indicator", result.indicators.eta),
  };
  write_vtu(*result.mesh, fields, dir / (problem.name + "_adapt_final.vtu"));

  for (const CycleRecord& c : result.history.cycles) {
    std::cout << "cycle " << std::setw(3) << c.cycle << "  dofs " << std::setw(8) << c.dofs << "  estimate "
              << std::scientific << std::setprecision(4) << c.estimate << std::defaultfloat << "  its "
              << c.iterations << '\n';
  }
  std::cout << (result.reached_tolerance ? "estimator tolerance reached" : "stopped before tolerance (cycle or dof budget)")
            << "; wrote " << csv.string() << '\n';
  return 0;
}

int run_check() {
  bool all = true;
  for (const CheckResult& r : run_invariant_checks()) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << '\n';
    all = all && r.passed;
  }
  return all ? 0 : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonvariational finite element solver for the infinity Laplacian on [-1,1]^2"};
  app.require_subcommand(1);

  const auto names = [] {
    std::vector<std::string> v;
    for (const auto& [name, p] : registry()) v.push_back(name);
    return v;
  }();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "uniform refinement study with EOC table, CSV and VTU output");
  solve_cmd->add_option("--problem", solve.problem, "benchmark problem")->required()->check(CLI::IsMember(names));
  solve_cmd->add_option("--levels", solve.levels, "number of mesh levels")->check(CLI::Range(2, 12));
  solve_cmd->add_option("--tau", solve.tau, "relaxation parameter (default: problem's)")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tol-factor", solve.tol_factor, "stop when ||U^n - U^{n-1}|| <= F h^2")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iters", solve.max_iters, "fixed-point iteration cap")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--out", solve.out, "output directory (default: $INFLAP_OUT or .)");
  solve_cmd->add_flag("--estimator-hessian-trace", solve.hessian_trace, "use tr H[U^n] in the interior residual");

  AdaptArgs adapt;
  auto* adapt_cmd = app.add_subcommand("adapt", "adaptive SOLVE-ESTIMATE-MARK-REFINE run");
  adapt_cmd->add_option("--problem", adapt.problem, "benchmark problem")->required()->check(CLI::IsMember(names));
  adapt_cmd->add_option("--tol", adapt.tol, "estimator tolerance")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--theta", adapt.theta, "Doerfler fraction in (0,1]")->check(CLI::Range(1e-12, 1.0));
  adapt_cmd->add_option("--tau", adapt.tau, "relaxation parameter")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--max-cycles", adapt.max_cycles, "cycle cap")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--dof-budget", adapt.dof_budget, "stop once this many dofs are reached")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--tol-factor", adapt.tol_factor, "stop when ||U^n - U^{n-1}|| <= F h^2")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--max-iters", adapt.max_iters, "fixed-point iteration cap")->check(CLI::PositiveNumber);
  adapt_cmd->add_option("--out", adapt.out, "output directory (default: $INFLAP_OUT or .)");
  adapt_cmd->add_flag("--estimator-hessian-trace", adapt.hessian_trace, "use tr H[U^n] in the interior residual");

  app.add_subcommand("check", "run the invariant suite on small meshes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*adapt_cmd) return run_adapt(adapt);
    return run_check();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
