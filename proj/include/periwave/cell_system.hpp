#pragma once

#include <array>
#include <vector>

#include "periwave/medium.hpp"
#include "periwave/mesh.hpp"
#include "periwave/types.hpp"

namespace periwave {

// Discretization of the quasi-periodic cell form
//   a_z(v, phi) = int grad v . grad phi + log(z) (v d1 phi - d1 v phi)
//                 - (k^2 q + log^2 z) v phi
// on periodic P1 elements. The z- and k2-dependence lives entirely in the
// scalar combination A(z) = K + log(z) S - k2 Mq - log(z)^2 M of four real
// matrices assembled once and sharing one sparsity pattern, so re-assembly
// per z is a cheap elementwise pass.
struct CellDiscretization {
  UnitCellMesh mesh;
  CellProblem problem;

  SpMatR stiffness;   // K_ij = int grad phi_j . grad phi_i
  SpMatR transport;   // S_ij = int (phi_j d1 phi_i - d1 phi_j phi_i), S^T = -S
  SpMatR mass;        // M_ij = int phi_j phi_i
  SpMatR mass_q;      // (Mq)_ij = int q phi_j phi_i

  // Source data cached at the 7 element quadrature points: x1 coordinate and
  // weight * f(x_q); the rhs for a given z is -sum z^{-x1_q} fw_q lambda_a.
  std::vector<std::array<int, 3>> elem_dofs;
  std::vector<double> qp_x1;   // 7 per element
  std::vector<Complex> qp_fw;  // 7 per element
  std::array<std::array<double, 3>, 7> qp_lambda;

  SpMatR vertex_mass;  // over all vertices, for L2 norms of cell fields

  int n_dofs() const { return mesh.n_dofs; }
};

CellDiscretization build_cell_discretization(const UnitCellMesh& mesh, const CellProblem& problem);

// Same matrices (they depend only on q), new source: only the cached rhs
// quadrature data is rebuilt.
CellDiscretization with_source(const CellDiscretization& disc, const ComplexField& source);

// A(z) with the principal log branch (cut along the negative real axis).
SpMatC assemble_cell_matrix(const CellDiscretization& disc, Complex z, Complex k2);

// rhs_l = -int z^{-x1} f phi_l (deterministic element order).
VecC assemble_cell_rhs(const CellDiscretization& disc, Complex z);

// Bloch eigenpencil at multiplier e^{i alpha}: A(alpha) = K + i alpha S
// + alpha^2 M against B = Mq; A(alpha) - k2 Mq equals the cell matrix at
// z = e^{i alpha}. Dense variants for small meshes.
MatC dense_bloch_matrix(const CellDiscretization& disc, double alpha);
SpMatC sparse_bloch_matrix(const CellDiscretization& disc, double alpha);

// Per-vertex field z^{x1} v from periodic dof values of v.
VecC vertex_field_from_dofs(const CellDiscretization& disc, const VecC& dof_values, Complex z);

}  // namespace periwave
