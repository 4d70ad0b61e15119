#include "periwave/cell_solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"

namespace periwave {

struct CellFactorization::Impl {
  const CellDiscretization* disc;
  Complex z;
  Complex k2;
  SpMatC A;
  double a_norm = 0.0;  // inf-norm proxy for scaling
  bool hermitian = false;
  bool ldlt_ok = false;
  Eigen::SimplicialLDLT<SpMatC, Eigen::Lower> ldlt;
  std::unique_ptr<Eigen::SparseLU<SpMatC>> lu;
  double indicator = -1.0;

  VecC raw_solve(const VecC& rhs) {
    if (ldlt_ok) return ldlt.solve(rhs);
    return lu->solve(rhs);
  }

  void ensure_lu() {
    if (lu) return;
    lu = std::make_unique<Eigen::SparseLU<SpMatC>>();
    lu->analyzePattern(A);
    lu->factorize(A);
    if (lu->info() != Eigen::Success)
      throw NearPoleError("cell system factorization failed", z, 0.0);
  }
};

namespace {

double matrix_scale(const SpMatC& A) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < A.nonZeros(); ++i)
    s = std::max(s, std::abs(A.valuePtr()[i]));
  return s == 0.0 ? 1.0 : s;
}

}  // namespace

CellFactorization::CellFactorization(const CellDiscretization& disc, Complex z, Complex k2)
    : impl_(std::make_unique<Impl>()) {
  impl_->disc = &disc;
  impl_->z = z;
  impl_->k2 = k2;
  impl_->A = assemble_cell_matrix(disc, z, k2);
  impl_->a_norm = matrix_scale(impl_->A);
  // On the unit circle with real k2 the matrix is Hermitian; LDLT is faster
  // and uses less memory than LU. The residual check below catches the rare
  // unpivoted-LDLT breakdown and switches to LU.
  impl_->hermitian = std::abs(std::abs(z) - 1.0) < 1e-14 && std::abs(k2.imag()) == 0.0;
  if (impl_->hermitian) {
    impl_->ldlt.compute(impl_->A);
    impl_->ldlt_ok = impl_->ldlt.info() == Eigen::Success;
  }
  if (!impl_->ldlt_ok)
    impl_->ensure_lu();
}

CellFactorization::~CellFactorization() = default;
CellFactorization::CellFactorization(CellFactorization&&) noexcept = default;
CellFactorization& CellFactorization::operator=(CellFactorization&&) noexcept = default;

Complex CellFactorization::z() const { return impl_->z; }

VecC CellFactorization::solve(const VecC& rhs, double residual_tol, double* residual_out) {
  const double rhs_norm = rhs.norm();
  if (rhs_norm == 0.0) {
    if (residual_out) *residual_out = 0.0;
    return VecC::Zero(rhs.size());
  }
  VecC v = impl_->raw_solve(rhs);
  VecC r = rhs - impl_->A * v;
  double rel = r.norm() / rhs_norm;
  if (rel > residual_tol) {
    // One refinement step through the same factorization.
    v += impl_->raw_solve(r);
    r = rhs - impl_->A * v;
    rel = r.norm() / rhs_norm;
  }
  if (rel > residual_tol && impl_->ldlt_ok) {
    // Hermitian fast path was not accurate enough; redo with pivoted LU.
    impl_->ldlt_ok = false;
    impl_->ensure_lu();
    v = impl_->raw_solve(rhs);
    r = rhs - impl_->A * v;
    rel = r.norm() / rhs_norm;
    if (rel > residual_tol) {
      v += impl_->raw_solve(r);
      r = rhs - impl_->A * v;
      rel = r.norm() / rhs_norm;
    }
  }
  if (rel > residual_tol)
    throw NumericalFailure("cell solve residual " + std::to_string(rel) + " exceeds tolerance");
  if (residual_out) *residual_out = rel;
  return v;
}

double CellFactorization::singularity_indicator(int max_iters) {
  if (impl_->indicator >= 0.0) return impl_->indicator;
  const auto& Mq = impl_->disc->mass_q;
  const Eigen::Index n = Mq.rows();
  // Power iteration on A^{-1} Mq; its dominant eigenvalue is 1/mu_min where
  // mu_min is the generalized eigenvalue of (A, Mq) closest to zero. A
  // deterministic start vector keeps results reproducible.
  VecC x(n);
  for (Eigen::Index i = 0; i < n; ++i)
    x[i] = Complex(std::cos(0.7 * static_cast<double>(i) + 0.3),
                   std::sin(1.3 * static_cast<double>(i) + 0.1));
  x /= x.norm();
  double rho = 0.0, rho_prev = -1.0;
  for (int it = 0; it < max_iters; ++it) {
    VecC y;
    try {
      y = impl_->raw_solve(VecC(Mq * x));
    } catch (...) {
      impl_->indicator = 0.0;
      return 0.0;
    }
    const double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) {
      impl_->indicator = ny == 0.0 ? 1e300 : 0.0;
      return impl_->indicator;
    }
    rho = ny;
    x = y / ny;
    if (it >= 7 && std::abs(rho - rho_prev) < 1e-3 * rho) break;
    rho_prev = rho;
  }
  const double value = rho == 0.0 ? 1e300 : 1.0 / rho;
  if (max_iters >= 60) impl_->indicator = value;
  return value;
}

CellSolution solve_cell(const CellDiscretization& disc, Complex z, Complex k2,
                        const CellSolveOptions& opts) {
  CellFactorization fac(disc, z, k2);
  CellSolution sol;
  sol.z = z;
  sol.k2 = k2;
  if (opts.guard_poles) {
    sol.indicator = fac.singularity_indicator(opts.guard_iters);
    if (sol.indicator < opts.near_pole_threshold)
      throw NearPoleError("cell system close to singular at this multiplier", z,
                          sol.indicator);
  }
  const VecC rhs = assemble_cell_rhs(disc, z);
  sol.dof_values = fac.solve(rhs, opts.residual_tol, &sol.residual);
  sol.vertex_w = vertex_field_from_dofs(disc, sol.dof_values, z);
  return sol;
}

double singularity_indicator(const CellDiscretization& disc, Complex z, Complex k2) {
  try {
    CellFactorization fac(disc, z, k2);
    return fac.singularity_indicator();
  } catch (const NearPoleError&) {
    return 0.0;
  }
}

void dump_cell_solution_csv(const CellSolution& sol, const std::string& path) {
  CsvWriter w(path);
  w.comment("cell solution: z = " + format_full(sol.z.real()) + " + " +
            format_full(sol.z.imag()) + "i, k2 = " + format_full(sol.k2.real()) +
            (sol.k2.imag() != 0.0 ? " + " + format_full(sol.k2.imag()) + "i" : ""));
  w.columns({"dof", "re_v", "im_v"});
  for (Eigen::Index i = 0; i < sol.dof_values.size(); ++i)
    w.row(std::vector<long>{static_cast<long>(i)},
          std::vector<double>{sol.dof_values[i].real(), sol.dof_values[i].imag()});
}

}  // namespace periwave
