#pragma once

#include <memory>
#include <string>

#include "periwave/cell_system.hpp"
#include "periwave/types.hpp"

namespace periwave {

struct CellSolveOptions {
  double residual_tol = 1e-10;       // relative residual required of the solve
  bool guard_poles = true;           // estimate the indicator and refuse near-singular z
  double near_pole_threshold = 1e-8; // indicator floor (units of k^2)
  int guard_iters = 60;              // power-iteration budget for the guard
};

struct CellSolution {
  Complex z;
  Complex k2;
  VecC dof_values;   // v_z over periodic dofs
  VecC vertex_w;     // w(z, x) = z^{x1} v_z(x) over all mesh vertices
  double residual = 0.0;
  double indicator = -1.0;  // negative when the guard was off
};

// Factorization of A(z) reusable for several right-hand sides at the same z.
class CellFactorization {
 public:
  CellFactorization(const CellDiscretization& disc, Complex z, Complex k2);
  ~CellFactorization();
  CellFactorization(CellFactorization&&) noexcept;
  CellFactorization& operator=(CellFactorization&&) noexcept;

  // Solves A(z) v = rhs with a residual check and one refinement pass;
  // falls back from the Hermitian fast path to sparse LU if needed.
  VecC solve(const VecC& rhs, double residual_tol, double* residual_out = nullptr);

  // Smallest |generalized eigenvalue| of (A(z), Mq): distance from k2 to the
  // Floquet spectrum at this z, estimated by power iteration on A^{-1} Mq.
  // Scale-free in h and sized in k^2 units; 0 for a singular matrix. A small
  // max_iters gives a cheap order-of-magnitude guard for production paths.
  double singularity_indicator(int max_iters = 60);

  Complex z() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

CellSolution solve_cell(const CellDiscretization& disc, Complex z, Complex k2,
                        const CellSolveOptions& opts = {});

double singularity_indicator(const CellDiscretization& disc, Complex z, Complex k2);

void dump_cell_solution_csv(const CellSolution& sol, const std::string& path);

}  // namespace periwave
