#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <utility>

#include "doctest.h"
#include "periwave/errors.hpp"
#include "periwave/mesh.hpp"

using namespace periwave;

namespace {

double tri_area(const UnitCellMesh& m, int t) {
  const auto& tr = m.triangles[static_cast<std::size_t>(t)];
  const double ax = m.x1(tr[0]), ay = m.x2(tr[0]);
  const double bx = m.x1(tr[1]), by = m.x2(tr[1]);
  const double cx = m.x1(tr[2]), cy = m.x2(tr[2]);
  return 0.5 * ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay));
}

double tri_diameter(const UnitCellMesh& m, int t) {
  const auto& tr = m.triangles[static_cast<std::size_t>(t)];
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      d = std::max(d, std::hypot(m.x1(tr[i]) - m.x1(tr[j]), m.x2(tr[i]) - m.x2(tr[j])));
    }
  }
  return d;
}

void check_invariants(const UnitCellMesh& m) {
  // Pairing: bijection with equal heights.
  REQUIRE(m.left_nodes.size() == m.right_nodes.size());
  REQUIRE(m.pairing.size() == m.left_nodes.size());
  std::set<int> lefts, rights;
  for (const auto& pr : m.pairing) {
    lefts.insert(pr[0]);
    rights.insert(pr[1]);
    CHECK(m.x1(pr[0]) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(m.x1(pr[1]) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(m.x2(pr[0]) - m.x2(pr[1])) <= 1e-12);
    CHECK(m.dof_map[static_cast<std::size_t>(pr[0])] ==
          m.dof_map[static_cast<std::size_t>(pr[1])]);
  }
  CHECK(lefts.size() == m.pairing.size());
  CHECK(rights.size() == m.pairing.size());

  // Conformity: every edge belongs to one or two triangles; single-count
  // edges must lie on the rectangle boundary.
  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < m.n_triangles(); ++t) {
    CHECK(tri_area(m, t) > 0.0);
    const auto& tr = m.triangles[static_cast<std::size_t>(t)];
    for (int e = 0; e < 3; ++e) {
      const int a = tr[e], b = tr[(e + 1) % 3];
      edge_count[{std::min(a, b), std::max(a, b)}]++;
    }
  }
  for (const auto& [edge, count] : edge_count) {
    REQUIRE(count >= 1);
    REQUIRE(count <= 2);
    if (count == 1) {
      auto on_boundary = [&](int v) {
        return std::abs(std::abs(m.x1(v)) - 0.5) <= 1e-12 || std::abs(m.x2(v)) <= 1e-12 ||
               std::abs(m.x2(v) - 1.0) <= 1e-12;
      };
      CHECK(on_boundary(edge.first));
      CHECK(on_boundary(edge.second));
    }
  }

  // Size and uniformity.
  double dmin = 1e30, dmax = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) {
    dmin = std::min(dmin, tri_diameter(m, t));
    dmax = std::max(dmax, tri_diameter(m, t));
  }
  CHECK(dmax <= m.h * (1.0 + 1e-12));
  CHECK(dmin / dmax >= 0.2);

  // Periodic dof count.
  std::set<int> dofs(m.dof_map.begin(), m.dof_map.end());
  CHECK(static_cast<int>(dofs.size()) == m.n_dofs);
  CHECK(m.n_dofs == m.n_vertices() - static_cast<int>(m.right_nodes.size()));
}

}  // namespace

TEST_CASE("counting on coarse grids") {
  const UnitCellMesh m2 = build_structured_mesh(0.5);
  CHECK(m2.n_vertices() == 9);
  CHECK(m2.n_triangles() == 8);
  CHECK(m2.right_nodes.size() == 3);
  CHECK(m2.n_dofs == 6);

  const UnitCellMesh m3 = build_structured_mesh(1.0 / 3.0);
  CHECK(m3.n_vertices() == 16);
  CHECK(m3.n_triangles() == 18);
  CHECK(m3.n_dofs == 12);
}

TEST_CASE("invariants across mesh sizes") {
  for (double h : {0.5, 0.21, 0.1, 0.034, 0.01}) {
    CAPTURE(h);
    check_invariants(build_structured_mesh(h));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_structured_mesh(0.0), InvalidParameter);
  CHECK_THROWS_AS(build_structured_mesh(-0.1), InvalidParameter);
  CHECK_THROWS_AS(build_structured_mesh(0.51), InvalidParameter);
}

TEST_CASE("diameters halve with h") {
  double prev = 0.0;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const UnitCellMesh m = build_structured_mesh(h);
    double dmax = 0.0;
    for (int t = 0; t < m.n_triangles(); ++t) dmax = std::max(dmax, tri_diameter(m, t));
    if (prev > 0.0) {
      CHECK(dmax <= 0.5 * prev * 1.05);
      CHECK(dmax >= 0.5 * prev / 1.05);
    }
    prev = dmax;
  }
}

TEST_CASE("locate_point on centroids and vertices") {
  const UnitCellMesh m = build_structured_mesh(0.25);
  for (int t = 0; t < m.n_triangles(); t += 3) {
    const auto& tr = m.triangles[static_cast<std::size_t>(t)];
    const double cx = (m.x1(tr[0]) + m.x1(tr[1]) + m.x1(tr[2])) / 3.0;
    const double cy = (m.x2(tr[0]) + m.x2(tr[1]) + m.x2(tr[2])) / 3.0;
    const PointLocation loc = locate_point(m, cx, cy);
    CHECK(loc.triangle == t);
    for (double lam : loc.barycentric) CHECK(lam == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
  for (int v = 0; v < m.n_vertices(); v += 2) {
    const PointLocation loc = locate_point(m, m.x1(v), m.x2(v));
    const auto& tr = m.triangles[static_cast<std::size_t>(loc.triangle)];
    double best = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (tr[i] == v) best = loc.barycentric[static_cast<std::size_t>(i)];
    }
    CHECK(best == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("locate_point reconstructs random points") {
  const UnitCellMesh m = build_structured_mesh(0.07);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = ux(rng), y = uy(rng);
    const PointLocation loc = locate_point(m, x, y);
    const auto& tr = m.triangles[static_cast<std::size_t>(loc.triangle)];
    double rx = 0.0, ry = 0.0, sum = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double lam = loc.barycentric[static_cast<std::size_t>(j)];
      CHECK(lam >= -1e-12);
      CHECK(lam <= 1.0 + 1e-12);
      rx += lam * m.x1(tr[j]);
      ry += lam * m.x2(tr[j]);
      sum += lam;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rx - x) <= 1e-10);
    CHECK(std::abs(ry - y) <= 1e-10);
  }
  CHECK_THROWS_AS(locate_point(m, 0.7, 0.5), OutOfDomain);
  CHECK_THROWS_AS(locate_point(m, 0.0, -0.2), OutOfDomain);
}

TEST_CASE("P1 evaluation and nested interpolation are exact on linears") {
  const UnitCellMesh coarse = build_structured_mesh(0.25);
  const UnitCellMesh fine = build_structured_mesh(0.125);
  auto linear = [](double x, double y) { return Complex(0.3 - 1.7 * x + 0.9 * y, 2.0 * x - y); };
  VecC fc(coarse.n_vertices());
  for (int v = 0; v < coarse.n_vertices(); ++v) fc[v] = linear(coarse.x1(v), coarse.x2(v));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = ux(rng), y = uy(rng);
    CHECK(std::abs(eval_field(coarse, fc, x, y) - linear(x, y)) <= 1e-12);
  }

  const VecC ff = interpolate_to(coarse, fc, fine);
  for (int v = 0; v < fine.n_vertices(); ++v) {
    CHECK(std::abs(ff[v] - linear(fine.x1(v), fine.x2(v))) <= 1e-12);
  }
}

TEST_CASE("vertex mass matrix integrates exactly") {
  const UnitCellMesh m = build_structured_mesh(0.2);
  const SpMatR mass = vertex_mass_matrix(m);
  const VecC ones = VecC::Constant(m.n_vertices(), Complex(1.0, 0.0));
  CHECK(l2_norm(mass, ones) == doctest::Approx(1.0).epsilon(1e-13));

  // ||x1||_L2 over the cell: integral of x^2 over (-1/2,1/2) is 1/12, and
  // x1 is P1 so the consistent mass integrates it exactly.
  VecC xf(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v) xf[v] = Complex(m.x1(v), 0.0);
  CHECK(l2_norm(mass, xf) == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(1e-13));

  CHECK(relative_l2_error(mass, xf, xf) == doctest::Approx(0.0));
}

TEST_CASE("mesh csv dump has the three sections") {
  const UnitCellMesh m = build_structured_mesh(0.5);
  const std::string path = "mesh_dump_test.csv";
  dump_mesh_csv(m, path, {"case = dump"});
  std::FILE* f = std::fopen(path.c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string content;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) content.append(buf, got);
  std::fclose(f);
  std::remove(path.c_str());
  CHECK(content.find("vertices") != std::string::npos);
  CHECK(content.find("triangles") != std::string::npos);
  CHECK(content.find("pairing") != std::string::npos);
  CHECK(content.find("# case = dump") != std::string::npos);
}
