#pragma once

#include <vector>

#include "periwave/medium.hpp"
#include "periwave/mesh.hpp"
#include "periwave/types.hpp"

namespace periwave {

// Long strip (-R-1/2, R+1/2) x (0,1) meshed as 2R+1 exact copies of the
// unit-cell triangulation; homogeneous Dirichlet at the far ends, Neumann
// top and bottom. With absorption the solution decays exponentially, so the
// truncation error is controlled by R alone.
struct TruncatedStrip {
  int R = 0;
  UnitCellMesh cell_mesh;          // the template cell
  int cols_per_cell = 0;
  int n_cols = 0;                  // global vertex columns = (2R+1)*cols_per_cell + 1
  int n_rows = 0;
  std::vector<int> dof_of_vertex;  // -1 on the Dirichlet end columns
  int n_dofs = 0;
  double dx = 0.0;

  int vertex(int i, int j) const { return j * n_cols + i; }
  int n_vertices() const { return n_cols * n_rows; }
  double x1_of_col(int i) const { return -R - 0.5 + i * dx; }
};

struct StripDiscretization {
  TruncatedStrip strip;
  SpMatR stiffness;  // over strip dofs
  SpMatR mass_q;
  VecC rhs;          // -int f phi, source supported in the center cell
  SpMatR cell_vertex_mass;  // unit-cell mass for per-cell norms
};

StripDiscretization build_strip_discretization(const CellProblem& problem, int R, double h);

struct StripSolution {
  double k2 = 0.0;
  double epsilon = 0.0;
  int R = 0;
  VecC vertex_values;  // all strip vertices, Dirichlet columns at 0
  double residual = 0.0;
};

// One sparse complex solve of (K - (k2 + i eps) Mq) u = rhs.
StripSolution solve_absorbing(const StripDiscretization& disc, double k2, double epsilon);

// Restriction of the strip field to cell n in unit-cell vertex ordering.
VecC strip_cell_field(const StripDiscretization& disc, const StripSolution& sol, int n);

double strip_cell_norm(const StripDiscretization& disc, const StripSolution& sol, int n);

// Sum_{|n| <= n_max} u(x1 + n, x2) z^{-n} on the unit-cell vertices.
VecC bloch_transform_truncated(const StripDiscretization& disc, const StripSolution& sol,
                               Complex z, int n_max);

// Three-solution Richardson extrapolation to eps = 0 assuming smooth
// eps-dependence; solutions ordered (eps, eps/2, eps/4) on one strip.
struct LapExtrapolation {
  std::vector<VecC> strip_values;  // not combined; kept for diagnostics
  VecC vertex_values;              // extrapolated strip field
  double diagnostic_ratio = 0.0;   // ||u3 - u2|| / ||u2 - u1||, want <= 0.9
  bool reliable = true;
};

LapExtrapolation extrapolate_lap(const std::vector<StripSolution>& solutions);

}  // namespace periwave
