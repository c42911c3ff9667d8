// Conforming triangulations of the square [-1,1]^2 with newest-vertex bisection.

#ifndef INFLAP_MESH_HPP
#define INFLAP_MESH_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace inflap {

using Index = int;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr Index kNone = -1;

/// Absolute tolerance for deciding whether a coordinate sits on the boundary of the square.
inline constexpr double kBoundaryTol = 1e-14;

struct Vertex {
  Vec2 x;
  bool on_boundary = false;
  /// Endpoints of the edge this vertex bisected in the refinement that created it.
  std::optional<std::array<Index, 2>> parents;
};

/// Local edge i is the edge opposite local vertex i. Vertices are counter-clockwise.
struct Triangle {
  std::array<Index, 3> vertices{};
  int refinement_edge = 0;
  Index parent = kNone;

  Index newest_vertex() const { return vertices[refinement_edge]; }
};

struct Edge {
  std::array<Index, 2> vertices{};
  /// adjacent[1] == kNone for boundary edges.
  std::array<Index, 2> adjacent{kNone, kNone};
  /// Unit normal pointing out of adjacent[0].
  Vec2 normal_from_first = Vec2::Zero();

  bool is_boundary() const { return adjacent[1] == kNone; }
};

/// Which edge list a triangle side lives in.
struct EdgeRef {
  bool interior = false;
  Index id = kNone;
};

/// Immutable conforming triangulation. Refinement produces a new value.
class Triangulation {
 public:
  Triangulation() = default;

  /// Build skeleton and adjacency from raw cells. Cells must be counter-clockwise.
  static Triangulation from_cells(std::vector<Vertex> vertices, std::vector<Triangle> triangles,
                                  int level = 0);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return triangles_; }
  std::span<const Edge> interior_edges() const { return interior_edges_; }
  std::span<const Edge> boundary_edges() const { return boundary_edges_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  int level() const { return level_; }

  const Vertex& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Triangle& triangle(Index k) const { return triangles_[static_cast<std::size_t>(k)]; }
  const Vec2& point(Index v) const { return vertex(v).x; }

  /// Side i of triangle k (opposite its local vertex i).
  EdgeRef side(Index k, int i) const { return sides_[static_cast<std::size_t>(k)][i]; }
  const Edge& edge(EdgeRef ref) const;
  /// Triangle across side i of k, or kNone on the boundary.
  Index neighbor(Index k, int i) const;

  std::array<Vec2, 3> corners(Index k) const;
  double area(Index k) const { return areas_[static_cast<std::size_t>(k)]; }
  /// Diameter, i.e. the longest edge length.
  double diameter(Index k) const;
  double max_diameter() const;

  /// Outward unit normal of side i of triangle k.
  Vec2 outward_normal(Index k, int i) const;
  double side_length(Index k, int i) const;

  /// Gradients of the three barycentric hat functions on triangle k.
  std::array<Vec2, 3> basis_gradients(Index k) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> interior_edges_;
  std::vector<Edge> boundary_edges_;
  std::vector<std::array<EdgeRef, 3>> sides_;
  std::vector<double> areas_;
  int level_ = 0;
};

double edge_length(const Triangulation& mesh, const Edge& e);
double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

/// Criss-cross mesh: n x n squares, each cut into four triangles by both diagonals.
Triangulation build_initial_mesh(int n);

/// Newest-vertex bisection of every marked triangle plus conforming closure.
/// Children record the id of the triangle they came from in `mesh`.
Triangulation refine(const Triangulation& mesh, std::span<const Index> marked);

/// Every triangle bisected twice (four children); all edges are halved.
Triangulation uniform_refine(const Triangulation& mesh);

/// Smallest interior angle over all triangles, in degrees.
double min_angle_degrees(const Triangulation& mesh);

/// Brute-force structural validation. Returns one message per violated invariant.
std::vector<std::string> validate(const Triangulation& mesh);

}  // namespace inflap

#endif  // INFLAP_MESH_HPP
