#pragma once

#include <string>
#include <vector>

#include "periwave/cell_solver.hpp"
#include "periwave/cell_system.hpp"
#include "periwave/contour.hpp"
#include "periwave/types.hpp"

namespace periwave {

struct SolveConfig {
  double k2 = 5.0;
  int N = 32;   // quadrature nodes per contour segment, even
  int N0 = 6;   // grading order
  int n_min = 0;
  int n_max = 0;
  int threads = 1;

  // Contour: built from dispersion data unless one is supplied.
  bool use_explicit_contour = false;
  Contour explicit_contour;
  int n_alpha = 64;   // dispersion grid for the automatic contour
  int n_bands = 12;
  DeltaPolicy delta_policy;

  CellSolveOptions cell_opts{1e-10, true, 1e-8, 8};
};

// LAP solution assembled cell by cell: cells[i] holds the nodal values of
// u(x1 + n, x2) for n = n_min + i at the vertices of the cell mesh.
struct LapSolution {
  int n_min = 0;
  int n_max = 0;
  std::vector<VecC> cells;
  UnitCellMesh mesh;

  double k2 = 0.0;
  int N = 0;
  int N0 = 0;
  double h = 0.0;
  Contour contour;
  int n_solves = 0;
  double min_node_indicator = 0.0;  // cheap-guard estimate, min over nodes
  double max_residual = 0.0;

  const VecC& cell(int n) const;
  bool has_cell(int n) const { return n >= n_min && n <= n_max; }
};

// Contour integral u(x1+n, x2) = (1/2 pi i) closed-int w(z, x) z^{n-1} dz
// evaluated with one cell solve per quadrature node, shared across all n.
LapSolution solve_full(const CellDiscretization& disc, const SolveConfig& config);

// Convenience: discretize (problem with source override) at mesh size h.
LapSolution solve_full(const CellProblem& problem, const ComplexField& source, double h,
                       const SolveConfig& config);

void dump_solution_csv(const LapSolution& sol, const std::string& path,
                       const std::vector<std::string>& header_lines = {});
void write_solution_summary(const LapSolution& sol, const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& extra = {});

}  // namespace periwave
