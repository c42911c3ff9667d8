#include "inflap/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace inflap {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

bool on_square_boundary(const Vec2& x) {
  return std::abs(std::max(std::abs(x.x()), std::abs(x.y())) - 1.0) <= kBoundaryTol;
}

Vec2 side_outward(const Vec2& from, const Vec2& to) {
  const Vec2 t = to - from;
  return Vec2(t.y(), -t.x()) / t.norm();
}

// Longest side, ties broken by the smallest opposite vertex id.
int longest_side(const std::array<Index, 3>& v, const std::vector<Vertex>& pts) {
  int best = 0;
  double best_len = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double len = (pts[v[(i + 1) % 3]].x - pts[v[(i + 2) % 3]].x).norm();
    if (len > best_len + 1e-14 || (std::abs(len - best_len) <= 1e-14 && v[i] < v[best])) {
      best = i;
      best_len = len;
    }
  }
  return best;
}

struct Bisector {
  const Triangulation& mesh;
  const std::unordered_map<std::uint64_t, Index>& midpoints;
  std::vector<Triangle>& out;

  void operator()(const Triangle& t, Index origin) const {
    const int r = t.refinement_edge;
    const Index c = t.vertices[r];
    const Index a = t.vertices[(r + 1) % 3];
    const Index b = t.vertices[(r + 2) % 3];
    const auto it = midpoints.find(edge_key(a, b));
    if (it == midpoints.end()) {
      Triangle leaf = t;
      leaf.parent = origin;
      out.push_back(leaf);
      return;
    }
    const Index m = it->second;
    (*this)(Triangle{{c, a, m}, 2, origin}, origin);
    (*this)(Triangle{{c, m, b}, 1, origin}, origin);
  }
};

// Bisects every triangle recursively through each marked edge. Marks must be closed:
// a triangle with any marked side also has its refinement side marked.
Triangulation bisect_marked(const Triangulation& mesh, const std::vector<char>& marked_edges) {
  const auto n_interior = static_cast<Index>(mesh.interior_edges().size());
  std::vector<Vertex> vertices(mesh.vertices().begin(), mesh.vertices().end());
  for (auto& v : vertices) v.parents.reset();

  std::unordered_map<std::uint64_t, Index> midpoints;
  for (std::size_t g = 0; g < marked_edges.size(); ++g) {
    if (!marked_edges[g]) continue;
    const auto gi = static_cast<Index>(g);
    const Edge& e = gi < n_interior ? mesh.interior_edges()[g]
                                    : mesh.boundary_edges()[g - static_cast<std::size_t>(n_interior)];
    Vertex mid;
    mid.x = 0.5 * (mesh.point(e.vertices[0]) + mesh.point(e.vertices[1]));
    mid.on_boundary = on_square_boundary(mid.x);
    mid.parents = e.vertices;
    midpoints.emplace(edge_key(e.vertices[0], e.vertices[1]), static_cast<Index>(vertices.size()));
    vertices.push_back(mid);
  }

  std::vector<Triangle> triangles;
  triangles.reserve(mesh.num_triangles() * 2);
  const Bisector bisect{mesh, midpoints, triangles};
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    bisect(mesh.triangles()[k], static_cast<Index>(k));
  }
  return Triangulation::from_cells(std::move(vertices), std::move(triangles), mesh.level() + 1);
}

Index global_edge(const Triangulation& mesh, EdgeRef ref) {
  return ref.interior ? ref.id : static_cast<Index>(mesh.interior_edges().size()) + ref.id;
}

}  // namespace

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a;
  const Vec2 w = c - a;
  return 0.5 * (u.x() * w.y() - u.y() * w.x());
}

double edge_length(const Triangulation& mesh, const Edge& e) {
  return (mesh.point(e.vertices[1]) - mesh.point(e.vertices[0])).norm();
}

Triangulation Triangulation::from_cells(std::vector<Vertex> vertices,
                                        std::vector<Triangle> triangles, int level) {
  Triangulation mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.level_ = level;

  const std::size_t nt = mesh.triangles_.size();
  mesh.areas_.resize(nt);
  mesh.sides_.assign(nt, {});

  struct Pending {
    Edge edge;
    std::array<std::pair<Index, int>, 2> owners{};
  };
  std::vector<Pending> edges;
  edges.reserve(nt * 3 / 2 + 8);
  std::unordered_map<std::uint64_t, Index> lookup;
  lookup.reserve(nt * 2);

  for (std::size_t k = 0; k < nt; ++k) {
    const auto& v = mesh.triangles_[k].vertices;
    const double area = signed_area(mesh.vertices_[v[0]].x, mesh.vertices_[v[1]].x,
                                    mesh.vertices_[v[2]].x);
    if (!(area > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(k) +
                                  " is degenerate or clockwise");
    }
    mesh.areas_[k] = area;
    for (int i = 0; i < 3; ++i) {
      const Index a = v[(i + 1) % 3];
      const Index b = v[(i + 2) % 3];
      const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<Index>(edges.size()));
      if (inserted) {
        Pending p;
        p.edge.vertices = {a, b};
        p.edge.adjacent = {static_cast<Index>(k), kNone};
        p.edge.normal_from_first = side_outward(mesh.vertices_[a].x, mesh.vertices_[b].x);
        p.owners[0] = {static_cast<Index>(k), i};
        p.owners[1] = {kNone, -1};
        edges.push_back(p);
      } else {
        Pending& p = edges[static_cast<std::size_t>(it->second)];
        if (p.edge.adjacent[1] != kNone) {
          throw std::invalid_argument("edge shared by more than two triangles");
        }
        p.edge.adjacent[1] = static_cast<Index>(k);
        p.owners[1] = {static_cast<Index>(k), i};
      }
    }
  }

  for (const Pending& p : edges) {
    const bool interior = p.edge.adjacent[1] != kNone;
    auto& list = interior ? mesh.interior_edges_ : mesh.boundary_edges_;
    const EdgeRef ref{interior, static_cast<Index>(list.size())};
    list.push_back(p.edge);
    for (const auto& [k, i] : p.owners) {
      if (k != kNone) mesh.sides_[static_cast<std::size_t>(k)][i] = ref;
    }
  }
  return mesh;
}

const Edge& Triangulation::edge(EdgeRef ref) const {
  return ref.interior ? interior_edges_[static_cast<std::size_t>(ref.id)]
                      : boundary_edges_[static_cast<std::size_t>(ref.id)];
}

Index Triangulation::neighbor(Index k, int i) const {
  const EdgeRef ref = side(k, i);
  if (!ref.interior) return kNone;
  const Edge& e = edge(ref);
  return e.adjacent[0] == k ? e.adjacent[1] : e.adjacent[0];
}

std::array<Vec2, 3> Triangulation::corners(Index k) const {
  const auto& v = triangle(k).vertices;
  return {point(v[0]), point(v[1]), point(v[2])};
}

double Triangulation::diameter(Index k) const {
  const auto p = corners(k);
  return std::max({(p[1] - p[0]).norm(), (p[2] - p[1]).norm(), (p[0] - p[2]).norm()});
}

double Triangulation::max_diameter() const {
  double h = 0.0;
  for (std::size_t k = 0; k < triangles_.size(); ++k) h = std::max(h, diameter(static_cast<Index>(k)));
  return h;
}

Vec2 Triangulation::outward_normal(Index k, int i) const {
  const auto p = corners(k);
  return side_outward(p[(i + 1) % 3], p[(i + 2) % 3]);
}

double Triangulation::side_length(Index k, int i) const {
  const auto p = corners(k);
  return (p[(i + 2) % 3] - p[(i + 1) % 3]).norm();
}

std::array<Vec2, 3> Triangulation::basis_gradients(Index k) const {
  const auto p = corners(k);
  const double two_area = 2.0 * area(k);
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2& a = p[(i + 1) % 3];
    const Vec2& b = p[(i + 2) % 3];
    g[i] = Vec2(a.y() - b.y(), b.x() - a.x()) / two_area;
  }
  return g;
}

Triangulation build_initial_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_initial_mesh: n must be positive");
  const double h = 2.0 / n;
  std::vector<Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1) + n * n));
  auto corner = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      Vertex v;
      // Exact endpoints so that boundary coordinates are exactly +-1.
      v.x = Vec2(i == n ? 1.0 : -1.0 + i * h, j == n ? 1.0 : -1.0 + j * h);
      v.on_boundary = on_square_boundary(v.x);
      vertices.push_back(v);
    }
  }
  const int first_center = (n + 1) * (n + 1);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Vertex v;
      v.x = 0.5 * (vertices[corner(i, j)].x + vertices[corner(i + 1, j + 1)].x);
      vertices.push_back(v);
    }
  }

  std::vector<Triangle> triangles;
  triangles.reserve(static_cast<std::size_t>(4 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Index c = first_center + j * n + i;
      const std::array<Index, 4> ring{corner(i, j), corner(i + 1, j), corner(i + 1, j + 1),
                                      corner(i, j + 1)};
      for (int s = 0; s < 4; ++s) {
        Triangle t;
        t.vertices = {ring[s], ring[(s + 1) % 4], c};
        t.refinement_edge = longest_side(t.vertices, vertices);
        triangles.push_back(t);
      }
    }
  }
  return Triangulation::from_cells(std::move(vertices), std::move(triangles), 0);
}

Triangulation refine(const Triangulation& mesh, std::span<const Index> marked) {
  const auto nt = static_cast<Index>(mesh.num_triangles());
  for (const Index k : marked) {
    if (k < 0 || k >= nt) {
      throw std::invalid_argument("refine: unknown triangle id " + std::to_string(k));
    }
  }
  if (marked.empty()) return mesh;

  std::vector<char> edge_marks(mesh.interior_edges().size() + mesh.boundary_edges().size(), 0);
  std::deque<Index> work;
  auto mark_refinement_side = [&](Index k) {
    const int r = mesh.triangle(k).refinement_edge;
    const Index g = global_edge(mesh, mesh.side(k, r));
    if (edge_marks[static_cast<std::size_t>(g)]) return;
    edge_marks[static_cast<std::size_t>(g)] = 1;
    const Index nb = mesh.neighbor(k, r);
    if (nb != kNone) work.push_back(nb);
  };
  for (const Index k : marked) mark_refinement_side(k);

  // Conforming closure: a triangle with a marked side must bisect its refinement side first.
  while (!work.empty()) {
    const Index k = work.front();
    work.pop_front();
    bool any = false;
    for (int i = 0; i < 3; ++i) {
      any = any || edge_marks[static_cast<std::size_t>(global_edge(mesh, mesh.side(k, i)))];
    }
    if (any) mark_refinement_side(k);
  }
  return bisect_marked(mesh, edge_marks);
}

Triangulation uniform_refine(const Triangulation& mesh) {
  std::vector<char> all(mesh.interior_edges().size() + mesh.boundary_edges().size(), 1);
  return bisect_marked(mesh, all);
}

double min_angle_degrees(const Triangulation& mesh) {
  double min_angle = 180.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto p = mesh.corners(static_cast<Index>(k));
    for (int i = 0; i < 3; ++i) {
      const Vec2 u = p[(i + 1) % 3] - p[i];
      const Vec2 w = p[(i + 2) % 3] - p[i];
      const double c = std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(c) * 180.0 / std::numbers::pi);
    }
  }
  return min_angle;
}

std::vector<std::string> validate(const Triangulation& mesh) {
  std::vector<std::string> problems;
  auto report = [&problems](std::string msg) {
    if (problems.size() < 32) problems.push_back(std::move(msg));
  };

  const auto verts = mesh.vertices();
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const Vec2& x = verts[v].x;
    if (std::abs(x.x()) > 1.0 + kBoundaryTol || std::abs(x.y()) > 1.0 + kBoundaryTol) {
      report("vertex " + std::to_string(v) + " outside the square");
    }
    if (verts[v].on_boundary != on_square_boundary(x)) {
      report("vertex " + std::to_string(v) + " has a wrong boundary flag");
    }
  }

  double total_area = 0.0;
  for (std::size_t k = 0; k < mesh.num_triangles(); ++k) {
    const auto p = mesh.corners(static_cast<Index>(k));
    const double a = signed_area(p[0], p[1], p[2]);
    if (!(a > 0.0)) report("triangle " + std::to_string(k) + " has nonpositive signed area");
    total_area += a;
  }
  if (std::abs(total_area - 4.0) > 1e-10) {
    report("total area " + std::to_string(total_area) + " differs from 4");
  }

  for (const Edge& e : mesh.interior_edges()) {
    if (e.adjacent[0] == kNone || e.adjacent[1] == kNone) report("interior edge lacks a neighbor");
    if (std::abs(e.normal_from_first.norm() - 1.0) > 1e-12) report("interior normal not unit");
  }
  for (const Edge& e : mesh.boundary_edges()) {
    const Vec2& a = mesh.point(e.vertices[0]);
    const Vec2& b = mesh.point(e.vertices[1]);
    const bool on_side = (std::abs(a.x() - b.x()) <= kBoundaryTol && std::abs(std::abs(a.x()) - 1.0) <= kBoundaryTol) ||
                         (std::abs(a.y() - b.y()) <= kBoundaryTol && std::abs(std::abs(a.y()) - 1.0) <= kBoundaryTol);
    if (!on_side) report("boundary edge not on the boundary of the square");
    if (std::abs(e.normal_from_first.norm() - 1.0) > 1e-12) report("boundary normal not unit");
  }

  // Hanging vertices: bucket vertices on a grid and test each edge against nearby vertices only.
  const double cell = std::max(mesh.max_diameter(), 1e-6);
  const int nb = std::max(1, static_cast<int>(std::ceil(2.0 / cell)));
  auto bucket = [nb](double c) { return std::clamp(static_cast<int>((c + 1.0) / 2.0 * nb), 0, nb - 1); };
  std::vector<std::vector<Index>> grid(static_cast<std::size_t>(nb * nb));
  for (std::size_t v = 0; v < verts.size(); ++v) {
    grid[static_cast<std::size_t>(bucket(verts[v].x.y()) * nb + bucket(verts[v].x.x()))].push_back(
        static_cast<Index>(v));
  }
  auto check_edge = [&](const Edge& e) {
    const Vec2& a = mesh.point(e.vertices[0]);
    const Vec2& b = mesh.point(e.vertices[1]);
    const Vec2 t = b - a;
    const double len2 = t.squaredNorm();
    for (int by = bucket(std::min(a.y(), b.y())); by <= bucket(std::max(a.y(), b.y())); ++by) {
      for (int bx = bucket(std::min(a.x(), b.x())); bx <= bucket(std::max(a.x(), b.x())); ++bx) {
        for (const Index v : grid[static_cast<std::size_t>(by * nb + bx)]) {
          if (v == e.vertices[0] || v == e.vertices[1]) continue;
          const Vec2 d = mesh.point(v) - a;
          const double s = d.dot(t) / len2;
          const double cross = std::abs(d.x() * t.y() - d.y() * t.x());
          if (s > 1e-12 && s < 1.0 - 1e-12 && cross <= 1e-12 * len2) {
            report("hanging vertex " + std::to_string(v));
          }
        }
      }
    }
  };
  for (const Edge& e : mesh.interior_edges()) check_edge(e);
  for (const Edge& e : mesh.boundary_edges()) check_edge(e);
  return problems;
}

}  // namespace inflap
