#pragma once

#include <array>
#include <string>
#include <vector>

#include "periwave/types.hpp"

namespace periwave {

// Conforming triangulation of the unit cell (-1/2, 1/2] x (0, 1) with the
// left and right boundaries identified. Right-boundary vertices exist
// geometrically but share the periodic dof of their left partner through
// dof_map; assembly never duplicates unknowns and the geometry stays simple.
struct UnitCellMesh {
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> left_nodes;    // x1 = -1/2, ascending x2
  std::vector<int> right_nodes;   // x1 = +1/2, ascending x2
  std::vector<std::array<int, 2>> pairing;  // (left, right) vertex indices
  double h = 0.0;                 // max element diameter
  std::vector<int> dof_map;       // vertex -> periodic dof
  int n_dofs = 0;
  int n1 = 0, n2 = 0;             // grid subdivisions in x1, x2

  double x1(int v) const { return vertices[static_cast<std::size_t>(v)][0]; }
  double x2(int v) const { return vertices[static_cast<std::size_t>(v)][1]; }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

// Uniform (n+1)x(n+1) grid with n = ceil(1/h), each square split into two
// triangles along the same diagonal so meshes with nested n are nested.
UnitCellMesh build_structured_mesh(double h);

struct PointLocation {
  int triangle;
  std::array<double, 3> barycentric;
};

// Locates x in the closure of the cell; throws OutOfDomain outside.
PointLocation locate_point(const UnitCellMesh& mesh, double x1, double x2);

// Evaluates a per-vertex nodal field at an arbitrary point (P1 interpolation).
Complex eval_field(const UnitCellMesh& mesh, const VecC& vertex_field, double x1, double x2);

// P1-interpolates a per-vertex field from one structured mesh onto another.
// Exact when the target vertices lie inside source elements (nested meshes).
VecC interpolate_to(const UnitCellMesh& from, const VecC& vertex_field, const UnitCellMesh& to);

// Consistent P1 mass matrix over all vertices (no periodic identification);
// used for L2 norms of per-cell fields, which are not periodic.
SpMatR vertex_mass_matrix(const UnitCellMesh& mesh);

double l2_norm(const SpMatR& mass, const VecC& field);
double relative_l2_error(const SpMatR& mass, const VecC& approx, const VecC& reference);

// CSV dump with sections `vertices`, `triangles`, `pairing` (0-based indices).
void dump_mesh_csv(const UnitCellMesh& mesh, const std::string& path,
                   const std::vector<std::string>& header_lines = {});

}  // namespace periwave
