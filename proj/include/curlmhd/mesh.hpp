#pragma once

#include "curlmhd/common.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace curlmhd {

enum class Domain { unit_square, lshape, periodic_square };
enum class MeshStyle { structured, unstructured };

struct Triangle {
  std::array<int, 3> v{};          // counter-clockwise
  std::array<int, 3> faces{-1, -1, -1};  // local edge l joins v[l] and v[(l+1)%3]
  std::array<int, 3> face_sign{};  // +1 if v[l] -> v[l+1] follows the face's global orientation
  double area = 0.0;
  double diameter = 0.0;
};

/// An edge of the triangulation. Geometry is stored as seen from cells[0];
/// cells[1] sees the same edge translated by `shift` (nonzero only on a periodic seam).
struct Face {
  std::array<int, 2> v{};  // ordered by vertex class: class(v[0]) < class(v[1])
  std::array<int, 2> cells{-1, -1};
  std::array<int, 2> local{-1, -1};  // local edge index inside each adjacent cell
  Vec2 normal = Vec2::Zero();   // outward from cells[0]
  Vec2 tangent = Vec2::Zero();  // rot90(normal)
  Vec2 shift = Vec2::Zero();
  double length = 0.0;
  bool boundary = false;

  Vec2 point(const std::vector<Vec2>& verts, double s) const {
    return (1.0 - s) * verts[v[0]] + s * verts[v[1]];
  }
};

class Mesh {
 public:
  Domain domain = Domain::unit_square;
  std::vector<Vec2> vertices;
  std::vector<Triangle> cells;
  std::vector<Face> faces;
  // Periodic identification classes; identity for non-periodic meshes.
  std::vector<int> vertex_class;
  int num_vertex_classes = 0;
  bool periodic = false;
  Vec2 box_min = Vec2::Zero();
  Vec2 box_max = Vec2::Ones();

  int num_boundary_faces() const;
  double total_area() const;
  double h_max() const;
  double h_min() const;
  double min_angle_deg() const;
  Vec2 centroid(int cell) const;
};

struct MeshOptions {
  double min_angle_floor_deg = 20.0;
  double jitter = 0.2;   // fraction of the grid spacing
  int max_retries = 10;
};

double domain_area(Domain d);

/// Structured or jittered-Delaunay triangulations. For the L-shape, `n` is the number
/// of cells per unit length; otherwise the number of subdivisions per axis.
Mesh generate_mesh(Domain domain, int n, MeshStyle style = MeshStyle::structured,
                   std::uint64_t seed = 0, const MeshOptions& opts = {});

/// Builds the face table, normals, tangents and cell metrics from vertices and triangles.
Mesh compute_connectivity(Mesh mesh);

/// Pairs opposite seam faces of a periodic square and records vertex classes.
Mesh apply_periodic_identification(Mesh mesh);

/// Plain-text dump: header line per section, then one record per line.
void write_mesh_text(const Mesh& mesh, std::ostream& os);

}  // namespace curlmhd
