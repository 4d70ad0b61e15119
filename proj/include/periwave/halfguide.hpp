#pragma once

#include <string>
#include <vector>

#include "periwave/fullguide.hpp"
#include "periwave/types.hpp"

namespace periwave {

// Dirichlet data on the interface {1/2} x (0,1), sampled at the mesh nodes
// of the cell's right edge in ascending x2 order.
struct TraceVector {
  VecC values;
};

// 1-D P1 mass matrix of the interface edge; the trace inner product.
SpMatR interface_mass_matrix(const UnitCellMesh& mesh);

// Smooth tensor modes sin(p pi (x1 + 1/2)) cos(r pi x2) chi(x1) with a
// cutoff keeping the support inside the open cell; p = 1..P1, r = 0..R1-1,
// row-major in (p, r).
struct SourceBasisSpec {
  int P1 = 6;
  int R1 = 4;
  double chi_inner = 0.30;  // |x1| below this: chi = 1
  double chi_outer = 0.48;  // |x1| above this: chi = 0

  int size() const { return P1 * R1; }
};

ComplexField basis_function(const SourceBasisSpec& basis, int ell);

// Trace map: source on the cell -> LAP solution's Dirichlet data on the
// interface (the n = 0 cell field evaluated on the right edge).
TraceVector apply_trace_operator(const CellDiscretization& disc, const ComplexField& source,
                                 const SolveConfig& config);

// Columns ell = apply_trace_operator(basis function ell), in basis order.
MatC build_trace_matrix(const CellDiscretization& disc, const SourceBasisSpec& basis,
                        const SolveConfig& config);

struct TikhonovResult {
  VecC coefficients;
  double residual = 0.0;  // ||Phi c - phi|| in the weighted trace norm
  double norm = 0.0;      // ||c||
};

// Minimizes ||Phi c - phi||^2_M + alpha ||c||^2 through the SVD of the
// M-weighted matrix; filter factors sigma / (sigma^2 + alpha).
TikhonovResult tikhonov_solve(const MatC& Phi, const SpMatR& trace_mass, const VecC& phi,
                              double alpha);

struct HalfGuideResult {
  LapSolution solution;  // cells n = 1..n_max
  double alpha_chosen = 0.0;
  double gamma1_mismatch = 0.0;
  VecC coefficients;
  std::vector<double> sweep_alphas;
  std::vector<double> sweep_mismatches;
};

// Recovers a cell source reproducing the Dirichlet data, then solves the
// full guide and restricts to the right half-guide. The sweep mismatch per
// alpha follows from linearity (trace of the recovered source's solution
// equals Phi c exactly), so only the chosen alpha triggers a full solve.
HalfGuideResult solve_half(const CellDiscretization& disc, const TraceVector& phi,
                           const SourceBasisSpec& basis, const std::vector<double>& alpha_sweep,
                           SolveConfig config);

}  // namespace periwave
