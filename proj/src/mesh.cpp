#include "periwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"

namespace periwave {

UnitCellMesh build_structured_mesh(double h) {
  if (!(h > 0.0) || h > 0.5)
    throw InvalidParameter("mesh spacing must lie in (0, 0.5]");
  const int n = static_cast<int>(std::ceil(1.0 / h - 1e-12));
  UnitCellMesh mesh;
  mesh.n1 = n;
  mesh.n2 = n;
  const double dx = 1.0 / n;
  mesh.h = dx * std::sqrt(2.0);

  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.vertices.resize(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices[static_cast<std::size_t>(vid(i, j))] = {-0.5 + i * dx, j * dx};

  // Split each square along the diagonal from its lower-left corner; the
  // split direction is uniform so refining n -> 2n nests the triangulation.
  mesh.triangles.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }

  for (int j = 0; j <= n; ++j) {
    mesh.left_nodes.push_back(vid(0, j));
    mesh.right_nodes.push_back(vid(n, j));
    mesh.pairing.push_back({vid(0, j), vid(n, j)});
  }

  // Periodic dofs: right-edge vertices alias their left partner.
  mesh.dof_map.assign(mesh.vertices.size(), -1);
  int next = 0;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.dof_map[static_cast<std::size_t>(vid(i, j))] = next++;
  for (int j = 0; j <= n; ++j)
    mesh.dof_map[static_cast<std::size_t>(vid(n, j))] = mesh.dof_map[static_cast<std::size_t>(vid(0, j))];
  mesh.n_dofs = next;
  return mesh;
}

namespace {

std::array<double, 3> barycentric_in(const UnitCellMesh& mesh, int t, double x, double y) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
  const double x0 = mesh.x1(tri[0]), y0 = mesh.x2(tri[0]);
  const double x1 = mesh.x1(tri[1]), y1 = mesh.x2(tri[1]);
  const double x2 = mesh.x1(tri[2]), y2 = mesh.x2(tri[2]);
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  const double l1 = ((x - x0) * (y2 - y0) - (x2 - x0) * (y - y0)) / det;
  const double l2 = ((x1 - x0) * (y - y0) - (x - x0) * (y1 - y0)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

PointLocation locate_point(const UnitCellMesh& mesh, double x1, double x2) {
  const double tol = 1e-10;
  if (x1 < -0.5 - tol || x1 > 0.5 + tol || x2 < -tol || x2 > 1.0 + tol)
    throw OutOfDomain("point outside the unit cell");
  const int n = mesh.n1;
  const double dx = 1.0 / n;
  // Clamp into the closed cell, then into grid square (i, j).
  const double cx = std::min(std::max(x1, -0.5), 0.5);
  const double cy = std::min(std::max(x2, 0.0), 1.0);
  int i = std::min(static_cast<int>(std::floor((cx + 0.5) / dx)), n - 1);
  int j = std::min(static_cast<int>(std::floor(cy / dx)), n - 1);
  // Local coordinates decide which of the square's two triangles holds x:
  // lower triangle {a,b,c} iff ly <= lx (below the a-c diagonal).
  const double lx = (cx + 0.5) / dx - i;
  const double ly = cy / dx - j;
  int t = 2 * (j * n + i) + (ly <= lx ? 0 : 1);
  auto lam = barycentric_in(mesh, t, cx, cy);
  // Points on the shared diagonal can land either way; nudge if needed.
  const double m0 = *std::min_element(lam.begin(), lam.end());
  if (m0 < -1e-12) {
    const int other = t ^ 1;
    auto lam2 = barycentric_in(mesh, other, cx, cy);
    if (*std::min_element(lam2.begin(), lam2.end()) > m0) {
      t = other;
      lam = lam2;
    }
  }
  for (auto& l : lam) l = std::min(std::max(l, 0.0), 1.0);
  const double s = lam[0] + lam[1] + lam[2];
  for (auto& l : lam) l /= s;
  return {t, lam};
}

Complex eval_field(const UnitCellMesh& mesh, const VecC& vertex_field, double x1, double x2) {
  const auto loc = locate_point(mesh, x1, x2);
  const auto& tri = mesh.triangles[static_cast<std::size_t>(loc.triangle)];
  Complex v = 0.0;
  for (int k = 0; k < 3; ++k) v += loc.barycentric[static_cast<std::size_t>(k)] * vertex_field[tri[static_cast<std::size_t>(k)]];
  return v;
}

VecC interpolate_to(const UnitCellMesh& from, const VecC& vertex_field, const UnitCellMesh& to) {
  VecC out(to.n_vertices());
  for (int v = 0; v < to.n_vertices(); ++v)
    out[v] = eval_field(from, vertex_field, to.x1(v), to.x2(v));
  return out;
}

SpMatR vertex_mass_matrix(const UnitCellMesh& mesh) {
  std::vector<TripletR> trips;
  trips.reserve(mesh.triangles.size() * 9);
  for (const auto& tri : mesh.triangles) {
    const double x0 = mesh.x1(tri[0]), y0 = mesh.x2(tri[0]);
    const double x1 = mesh.x1(tri[1]), y1 = mesh.x2(tri[1]);
    const double x2 = mesh.x1(tri[2]), y2 = mesh.x2(tri[2]);
    const double area = 0.5 * std::abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trips.emplace_back(tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)],
                           area * (a == b ? 1.0 / 6.0 : 1.0 / 12.0));
  }
  SpMatR m(mesh.n_vertices(), mesh.n_vertices());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double l2_norm(const SpMatR& mass, const VecC& field) {
  const Complex q = field.dot(mass * field);
  return std::sqrt(std::max(0.0, q.real()));
}

double relative_l2_error(const SpMatR& mass, const VecC& approx, const VecC& reference) {
  const double denom = l2_norm(mass, reference);
  if (denom == 0.0) return l2_norm(mass, approx);
  return l2_norm(mass, VecC(approx - reference)) / denom;
}

void dump_mesh_csv(const UnitCellMesh& mesh, const std::string& path,
                   const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  w.comment("section: vertices (index,x1,x2)");
  for (int v = 0; v < mesh.n_vertices(); ++v)
    w.row(std::vector<long>{v}, std::vector<double>{mesh.x1(v), mesh.x2(v)});
  w.comment("section: triangles (index,v0,v1,v2)");
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[static_cast<std::size_t>(t)];
    w.row(std::vector<long>{t, tri[0], tri[1], tri[2]}, std::vector<double>{});
  }
  w.comment("section: pairing (left,right)");
  for (const auto& pr : mesh.pairing)
    w.row(std::vector<long>{pr[0], pr[1]}, std::vector<double>{});
}

}  // namespace periwave
