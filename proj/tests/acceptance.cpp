// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   inflap_acceptance [--only N[,M...]] [--work DIR]

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "inflap/adapt.hpp"
#include "inflap/convergence.hpp"
#include "inflap/problems.hpp"
#include "coupled_oracle.hpp"
#include "oracles.hpp"

using namespace inflap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 3) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

MeshPtr share(Triangulation t) { return std::make_shared<const Triangulation>(std::move(t)); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CsvRow {
  std::vector<std::string> cells;
  double real(std::size_t i) const { return std::stod(cells.at(i)); }
};

std::vector<CsvRow> read_csv(const fs::path& p) {
  std::vector<CsvRow> rows;
  std::stringstream ss(slurp(p));
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    CsvRow r;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) r.cells.push_back(c);
    if (!line.empty() && line.back() == ',') r.cells.emplace_back();
    rows.push_back(r);
  }
  return rows;
}

// Column indices of the EOC table.
constexpr std::size_t kDofs = 2, kL2Eoc = 4, kH1Eoc = 6, kEstEoc = 8, kIters = 9;

struct Context {
  fs::path work;
  std::string cli = INFLAP_CLI_PATH;
  // Filled by earlier criteria, reused by later ones.
  std::optional<std::vector<CsvRow>> classical;
  std::optional<std::vector<CsvRow>> aronsson_tau1;
  std::optional<double> classical_seconds;
  std::optional<double> aronsson_seconds;

  int run(const std::string& args, const std::string& log) const {
    const std::string cmd = cli + " " + args + " > " + (work / log).string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

std::vector<CsvRow> solve_via_cli(Context& ctx, const std::string& problem, double tau, const std::string& dir,
                                  double& seconds) {
  const fs::path out = ctx.work / dir;
  fs::create_directories(out);
  const auto t0 = std::chrono::steady_clock::now();
  const int code = ctx.run("solve --problem " + problem + " --levels 5 --tau " + num(tau, 17) + " --out " + out.string(),
                           dir + ".log");
  seconds = seconds_since(t0);
  if (code != 0) throw std::runtime_error("inflap solve exited with status " + std::to_string(code));
  return read_csv(out / (problem + "_eoc.csv"));
}

const std::vector<CsvRow>& classical_table(Context& ctx) {
  if (!ctx.classical) {
    double s = 0.0;
    ctx.classical = solve_via_cli(ctx, "classical", 1000.0, "classical_a", s);
    ctx.classical_seconds = s;
  }
  return *ctx.classical;
}

const std::vector<CsvRow>& aronsson_table(Context& ctx) {
  if (!ctx.aronsson_tau1) {
    double s = 0.0;
    ctx.aronsson_tau1 = solve_via_cli(ctx, "aronsson", 1.0, "aronsson_tau1", s);
    ctx.aronsson_seconds = s;
  }
  return *ctx.aronsson_tau1;
}

Outcome classical_rates(Context& ctx) {
  const auto& rows = classical_table(ctx);
  if (rows.size() != 5) return {false, "expected 5 rows, got " + std::to_string(rows.size())};
  const double l2 = rows.back().real(kL2Eoc);
  const double h1 = rows.back().real(kH1Eoc);
  const bool ok = l2 >= 1.8 && l2 <= 2.2 && h1 >= 0.85 && h1 <= 1.15 && *ctx.classical_seconds < 120.0;
  return {ok, "final L2 EOC " + num(l2, 4) + " in [1.8, 2.2], H1 EOC " + num(h1, 4) + " in [0.85, 1.15], " +
                  num(*ctx.classical_seconds, 3) + " s"};
}

Outcome classical_iterations(Context& ctx) {
  const auto& rows = classical_table(ctx);
  int worst = 0;
  std::string per_level;
  for (const CsvRow& r : rows) {
    const int it = std::stoi(r.cells.at(kIters));
    worst = std::max(worst, it);
    per_level += (per_level.empty() ? "" : ",") + std::to_string(it);
  }
  std::string detail = "iterations per level " + per_level + " (hard bound 8)";
  if (worst > 5) detail += "; NOTE: exceeds 5 on some level";
  return {worst <= 8, detail};
}

Outcome aronsson_rates(Context& ctx) {
  const auto& rows = aronsson_table(ctx);
  if (rows.size() != 5) return {false, "expected 5 rows, got " + std::to_string(rows.size())};
  const double l2 = rows.back().real(kL2Eoc);
  const double h1 = rows.back().real(kH1Eoc);
  const bool ok = l2 >= 1.55 && l2 <= 2.05 && h1 >= 0.6 && h1 <= 1.0 && *ctx.aronsson_seconds < 300.0;
  return {ok, "final L2 EOC " + num(l2, 4) + " in [1.55, 2.05], H1 EOC " + num(h1, 4) + " in [0.6, 1.0], " +
                  num(*ctx.aronsson_seconds, 3) + " s"};
}

Outcome aronsson_iterations(Context& ctx) {
  double s = 0.0;
  const auto tau10 = solve_via_cli(ctx, "aronsson", 10.0, "aronsson_tau10", s);
  bool ok = tau10.size() == 5;
  std::string detail;
  for (const auto& [tau, rows] : {std::pair{1.0, aronsson_table(ctx)}, std::pair{10.0, tau10}}) {
    std::string per_level;
    for (const CsvRow& r : rows) {
      const int it = std::stoi(r.cells.at(kIters));
      ok = ok && it <= 20;
      per_level += (per_level.empty() ? "" : ",") + std::to_string(it);
    }
    detail += (detail.empty() ? "" : "; ") + std::string("tau=") + num(tau) + ": " + per_level;
  }
  return {ok, "iterations per level " + detail + " (bound 20)"};
}

Outcome adaptive_efficiency(Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemData& problem = aronsson_problem().data;

  // Uniform sweep at the problem's uniform tau until the first level with at least 50k dofs.
  std::vector<std::pair<std::size_t, double>> uniform;
  auto mesh = share(build_initial_mesh(4));
  while (true) {
    const SolveReport rep = fixed_point_solve(mesh, problem, SolverConfig{});
    const IndicatorField ind = estimate(rep.previous, rep.solution, problem.f, problem.tau);
    uniform.emplace_back(mesh->num_vertices(), ind.l2_estimate);
    if (mesh->num_vertices() >= 50000) break;
    mesh = share(uniform_refine(*mesh));
  }
  const double target = uniform.back().second;
  std::size_t uniform_dofs = 0;
  for (const auto& [dofs, est] : uniform) {
    if (est <= target) {
      uniform_dofs = dofs;
      break;
    }
  }

  AdaptiveConfig config;
  config.theta = 0.5;
  config.tau = 0.1;
  config.estimator_tol = target;
  config.max_cycles = 200;
  config.dof_budget = 200000;
  const AdaptiveResult res = adaptive_solve(problem, share(build_initial_mesh(4)), config);
  const std::size_t adaptive_dofs = res.mesh->num_vertices();
  const double secs = seconds_since(t0);
  const bool ok = res.reached_tolerance && 2 * adaptive_dofs <= uniform_dofs && secs < 600.0;
  return {ok, "E* = " + num(target, 4) + " reached by uniform at " + std::to_string(uniform_dofs) +
                  " dofs, by adaptive at " + std::to_string(adaptive_dofs) + " dofs after " +
                  std::to_string(res.history.cycles.size()) + " cycles (ratio " +
                  num(static_cast<double>(adaptive_dofs) / static_cast<double>(uniform_dofs), 3) +
                  ", bound 0.5), " + num(secs, 3) + " s"};
}

P1Function random_p1(const MeshPtr& m, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  P1Function v = P1Function::zeros(m);
  for (Eigen::Index i = 0; i < v.values.size(); ++i) v.values[i] = dist(rng);
  return v;
}

Outcome hessian_suite(Context&) {
  std::mt19937 rng(101);
  Triangulation r = build_initial_mesh(3);
  for (int i = 0; i < 5; ++i) {
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(r.num_triangles()) - 1);
    const std::vector<Index> marked{pick(rng), pick(rng)};
    r = refine(r, marked);
  }
  const std::vector<MeshPtr> meshes{share(build_initial_mesh(1)), share(build_initial_mesh(4)), share(std::move(r))};

  double affine = 0.0;
  for (const MeshPtr& m : meshes) {
    const P1Function v = interpolate(m, [](const Vec2& x) { return 1.3 - 0.4 * x.x() + 2.7 * x.y(); });
    affine = std::max(affine, fe_hessian(v).values.cwiseAbs().maxCoeff());
  }

  double consistency = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const MeshPtr& m = meshes[static_cast<std::size_t>(trial) % meshes.size()];
    const P1Function v = random_p1(m, rng);
    const TensorField h = fe_hessian(v);
    Mat2 lhs = Mat2::Zero();
    for (std::size_t k = 0; k < m->num_triangles(); ++k) lhs += m->area(static_cast<Index>(k)) * h.at(static_cast<Index>(k));
    Mat2 rhs = Mat2::Zero();
    for (const auto& [e, owners] : oracle::edge_owners(*m)) {
      if (owners.size() != 1) continue;
      const auto& t = m->triangle(owners[0]).vertices;
      int i = 0;
      while (t[i] == e.first || t[i] == e.second) ++i;
      const Vec2 d = m->point(t[(i + 2) % 3]) - m->point(t[(i + 1) % 3]);
      rhs += v.gradient(owners[0]) * Vec2(d.y(), -d.x()).transpose();
    }
    consistency = std::max(consistency, (lhs - rhs).cwiseAbs().maxCoeff());
  }

  Triangulation small = build_initial_mesh(2);
  const std::vector<Index> marked{2, 9};
  small = refine(small, marked);
  double coupled = 0.0;
  std::size_t largest = 0;
  for (const MeshPtr& m : {meshes[0], share(build_initial_mesh(2)), share(small)}) {
    largest = std::max(largest, m->num_triangles());
    for (const ProblemData& p : {classical_problem().data, aronsson_problem().data}) {
      Eigen::VectorXd a = interpolate(m, [](const Vec2& x) { return x.x() * x.y() + 0.5 * x.x(); }).values;
      Eigen::VectorXd b = a;
      const HessianOperator g(m);
      for (int it = 0; it < 3; ++it) {
        const P1Function u{m, a};
        LinearSystem s = assemble_step(g, u, g.apply(u), p, SolverConfig{});
        apply_dirichlet(s, P1Space(m), p.g);
        a = solve_linear(s.matrix, s.rhs, SolverConfig{});
        b = oracle::coupled_step(*m, b, p);
        coupled = std::max(coupled, (a - b).cwiseAbs().maxCoeff());
      }
    }
  }
  const bool ok = affine <= 1e-12 && consistency <= 1e-12 && coupled <= 1e-10 && largest <= 32;
  return {ok, "affine max|H| " + num(affine) + ", consistency " + num(consistency) + " (20 random V), coupled oracle " +
                  num(coupled) + " on meshes up to " + std::to_string(largest) + " triangles"};
}

Outcome estimator_suite(Context& ctx) {
  double zero = 0.0;
  for (int n : {1, 2, 4}) {
    const MeshPtr m = share(build_initial_mesh(n));
    const P1Function u = interpolate(m, [](const Vec2& x) { return 0.5 + 2.0 * x.x() - x.y(); });
    zero = std::max(zero, estimate(u, u, [](const Vec2&) { return 0.0; }, 1.0).global_estimate);
  }

  const auto& rows = classical_table(ctx);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    lo = std::min(lo, rows[i].real(kEstEoc));
    hi = std::max(hi, rows[i].real(kEstEoc));
  }

  std::mt19937 rng(55);
  Triangulation t = build_initial_mesh(3);
  const std::vector<Index> marked{1, 17, 33};
  const MeshPtr m = share(refine(t, marked));
  const P1Function a = random_p1(m, rng);
  const P1Function b = random_p1(m, rng);
  const IndicatorField ind = estimate(a, b, [](const Vec2& x) { return 1.0 - x.y(); }, 0.3);
  double lhs = 0.0, rhs = 0.0;
  for (double e : ind.eta) lhs += e * e;
  for (double r : ind.interior) rhs += r * r;
  for (std::size_t e = 0; e < ind.jump.size(); ++e) {
    const double he = edge_length(*m, m->interior_edges()[e]);
    const double j = jump_residual(EdgeRef{true, static_cast<Index>(e)}, a, b, 0.3);
    rhs += he * j * j * he;
  }
  const double partition = std::abs(lhs - rhs) / rhs;
  const bool ok = zero <= 1e-12 && lo >= 0.75 && hi <= 1.25 && partition <= 1e-13;
  return {ok, "zero case " + num(zero) + ", classical estimator EOC in [" + num(lo, 4) + ", " + num(hi, 4) +
                  "] (1 +- 0.25), edge partition relative gap " + num(partition)};
}

Outcome mesh_suite(Context&) {
  constexpr int kMaxGeneration = 48;
  int calls = 0;
  int deepest = 0;
  double worst_angle = 180.0;
  double worst_area = 0.0;
  std::string problem;

  auto inspect = [&](const Triangulation& m, double initial_area, bool full) {
    double total = 0.0;
    for (std::size_t k = 0; k < m.num_triangles(); ++k) {
      const double a = m.area(static_cast<Index>(k));
      total += a;
      deepest = std::max(deepest, static_cast<int>(std::lround(std::log2(initial_area / a))));
    }
    worst_area = std::max(worst_area, std::abs(total - 4.0));
    worst_angle = std::min(worst_angle, oracle::min_angle_degrees(m));
    if (problem.empty()) {
      const auto issues = validate(m);
      if (!issues.empty()) problem = issues.front();
    }
    if (full && problem.empty()) problem = oracle::conformity_violation(m);
  };

  // Eight bisection generations by uniform refinement.
  Triangulation u = build_initial_mesh(1);
  for (int g = 0; g < 4; ++g) {
    u = uniform_refine(u);
    inspect(u, 1.0, true);
  }

  // 1000 randomized refine calls: scattered markings and markings biased toward a point.
  std::mt19937 rng(2024);
  for (int run = 0; run < 4; ++run) {
    Triangulation m = build_initial_mesh(1 + run % 2);
    const double initial_area = m.area(0);
    const Vec2 focus(run < 2 ? 0.31 : -0.77, run % 2 == 0 ? 0.58 : -1.0);
    for (int step = 0; step < 250; ++step) {
      std::vector<Index> marked;
      std::uniform_int_distribution<Index> pick(0, static_cast<Index>(m.num_triangles()) - 1);
      if (step % 3 == 0) {
        for (int i = 0; i < 3; ++i) marked.push_back(pick(rng));
      } else {
        // Triangle whose centroid is closest to the focus point, skipping cells so deep that
        // their midpoints would no longer be representable in double precision.
        Index best = 0;
        double best_d = 1e300;
        for (std::size_t k = 0; k < m.num_triangles(); ++k) {
          if (m.area(static_cast<Index>(k)) < initial_area * std::ldexp(1.0, -kMaxGeneration)) continue;
          const auto p = m.corners(static_cast<Index>(k));
          const double d = ((p[0] + p[1] + p[2]) / 3.0 - focus).norm();
          if (d < best_d) {
            best_d = d;
            best = static_cast<Index>(k);
          }
        }
        marked.push_back(best);
        if (step % 5 == 0) marked.push_back(pick(rng));
      }
      m = refine(m, marked);
      ++calls;
      inspect(m, initial_area, step % 25 == 24);
    }
  }
  const bool ok = problem.empty() && worst_area <= 1e-10 && worst_angle >= 22.5 - 1e-9 && deepest >= 8 && calls == 1000;
  return {ok, std::to_string(calls) + " random refine calls, deepest generation " + std::to_string(deepest) +
                  ", min angle " + num(worst_angle, 6) + " deg, max area defect " + num(worst_area) +
                  (problem.empty() ? ", conforming" : ", " + problem)};
}

Outcome determinism(Context& ctx) {
  classical_table(ctx);
  double s = 0.0;
  solve_via_cli(ctx, "classical", 1000.0, "classical_b", s);
  const std::string a = slurp(ctx.work / "classical_a" / "classical_eoc.csv");
  const std::string b = slurp(ctx.work / "classical_b" / "classical_eoc.csv");

  std::string adapt[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = ctx.work / ("adapt_" + std::to_string(i));
    fs::create_directories(out);
    const int code = ctx.run("adapt --problem aronsson --tol 0.1 --theta 0.5 --tau 0.1 --out " + out.string(),
                             "adapt_" + std::to_string(i) + ".log");
    if (code != 0) return {false, "inflap adapt exited with status " + std::to_string(code)};
    adapt[i] = slurp(out / "aronsson_adapt_history.csv");
  }
  const bool ok = !a.empty() && a == b && !adapt[0].empty() && adapt[0] == adapt[1];
  return {ok, std::string("solve CSV ") + (a == b ? "identical" : "differs") + " (" + std::to_string(a.size()) +
                  " bytes), adapt CSV " + (adapt[0] == adapt[1] ? "identical" : "differs") + " (" +
                  std::to_string(adapt[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.work = fs::temp_directory_path() / "inflap_acceptance";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work" && i + 1 < argc) {
      ctx.work = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string n; std::getline(ss, n, ',');) only.insert(std::stoi(n));
    } else {
      std::cerr << "usage: inflap_acceptance [--only N[,M...]] [--work DIR]\n";
      return 2;
    }
  }
  fs::remove_all(ctx.work);
  fs::create_directories(ctx.work);

  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria{
      {"classical benchmark optimal rates", classical_rates},
      {"classical linearisation speed", classical_iterations},
      {"Aronsson suboptimal rates", aronsson_rates},
      {"Aronsson linearisation bound", aronsson_iterations},
      {"adaptive efficiency", adaptive_efficiency},
      {"Hessian property suite", hessian_suite},
      {"estimator property suite", estimator_suite},
      {"mesh suite", mesh_suite},
      {"determinism", determinism},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << criteria[i].first << "  ("
              << o.detail << ")" << std::endl;
  }
  return all ? 0 : 1;
}
