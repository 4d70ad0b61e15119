#include "periwave/halfguide.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

#include "periwave/errors.hpp"

namespace periwave {

SpMatR interface_mass_matrix(const UnitCellMesh& mesh) {
  const int n_seg = mesh.n2;
  const int n_nodes = static_cast<int>(mesh.right_nodes.size());
  if (n_nodes != n_seg + 1) {
    throw InvalidParameter("interface mass: right edge node count mismatch");
  }
  const double dx = 1.0 / static_cast<double>(n_seg);
  std::vector<TripletR> trips;
  trips.reserve(static_cast<std::size_t>(4 * n_seg));
  for (int e = 0; e < n_seg; ++e) {
    trips.emplace_back(e, e, dx / 3.0);
    trips.emplace_back(e + 1, e + 1, dx / 3.0);
    trips.emplace_back(e, e + 1, dx / 6.0);
    trips.emplace_back(e + 1, e, dx / 6.0);
  }
  SpMatR m(n_nodes, n_nodes);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

ComplexField basis_function(const SourceBasisSpec& basis, int ell) {
  if (basis.P1 < 1 || basis.R1 < 1) throw InvalidParameter("source basis: P1, R1 must be >= 1");
  if (!(basis.chi_inner > 0.0 && basis.chi_inner < basis.chi_outer && basis.chi_outer < 0.5)) {
    throw InvalidParameter("source basis: need 0 < chi_inner < chi_outer < 1/2");
  }
  if (ell < 0 || ell >= basis.size()) throw InvalidParameter("source basis: index out of range");
  const int p = ell / basis.R1 + 1;
  const int r = ell % basis.R1;
  const double a = basis.chi_inner;
  const double b = basis.chi_outer;
  return [p, r, a, b](double x1, double x2) -> Complex {
    const double chi = smooth_cutoff(std::abs(x1), a, b);
    if (chi == 0.0) return Complex(0.0, 0.0);
    const double val =
        std::sin(static_cast<double>(p) * kPi * (x1 + 0.5)) * std::cos(static_cast<double>(r) * kPi * x2) * chi;
    return Complex(val, 0.0);
  };
}

TraceVector apply_trace_operator(const CellDiscretization& disc, const ComplexField& source,
                                 const SolveConfig& config) {
  SolveConfig cfg = config;
  cfg.n_min = 0;
  cfg.n_max = 0;
  const LapSolution sol = solve_full(with_source(disc, source), cfg);
  const auto& nodes = disc.mesh.right_nodes;
  TraceVector tv;
  tv.values.resize(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    tv.values[static_cast<Eigen::Index>(i)] = sol.cell(0)[nodes[i]];
  }
  return tv;
}

MatC build_trace_matrix(const CellDiscretization& disc, const SourceBasisSpec& basis,
                        const SolveConfig& config) {
  // Resolvability guard: at least 8 grid points per basis oscillation.
  const int p_limit = disc.mesh.n1 / 4;
  const int r_limit = disc.mesh.n2 / 4;
  if (basis.P1 > p_limit || basis.R1 - 1 > r_limit) {
    throw InvalidParameter("source basis: mode count exceeds mesh resolution limit");
  }
  const int m0 = basis.size();
  const auto n_gamma = static_cast<Eigen::Index>(disc.mesh.right_nodes.size());
  MatC phi_mat(n_gamma, m0);
  for (int ell = 0; ell < m0; ++ell) {
    phi_mat.col(ell) = apply_trace_operator(disc, basis_function(basis, ell), config).values;
  }
  return phi_mat;
}

TikhonovResult tikhonov_solve(const MatC& Phi, const SpMatR& trace_mass, const VecC& phi,
                              double alpha) {
  if (Phi.rows() != phi.size() || Phi.rows() != trace_mass.rows()) {
    throw InvalidParameter("tikhonov: dimension mismatch");
  }
  if (!(alpha >= 0.0)) throw InvalidParameter("tikhonov: alpha must be >= 0");

  // Weighted least squares through the Cholesky factor of the trace mass:
  // ||Phi c - phi||_M = ||L^T Phi c - L^T phi||_2.
  const MatR mass_dense = MatR(trace_mass);
  Eigen::LLT<MatR> llt(mass_dense);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("tikhonov: trace mass matrix is not positive definite");
  }
  const MatR lt = llt.matrixU();
  const MatC phi_w = lt.cast<Complex>() * Phi;
  const VecC rhs_w = lt.cast<Complex>() * phi;

  Eigen::JacobiSVD<MatC> svd(phi_w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecR& sigma = svd.singularValues();
  const VecC projections = svd.matrixU().adjoint() * rhs_w;

  TikhonovResult out;
  out.coefficients = VecC::Zero(Phi.cols());
  for (Eigen::Index n = 0; n < sigma.size(); ++n) {
    const double filter = sigma[n] / (sigma[n] * sigma[n] + alpha);
    out.coefficients += filter * projections[n] * svd.matrixV().col(n);
  }
  out.residual = (phi_w * out.coefficients - rhs_w).norm();
  out.norm = out.coefficients.norm();
  return out;
}

HalfGuideResult solve_half(const CellDiscretization& disc, const TraceVector& phi,
                           const SourceBasisSpec& basis, const std::vector<double>& alpha_sweep,
                           SolveConfig config) {
  const auto& nodes = disc.mesh.right_nodes;
  if (phi.values.size() != static_cast<Eigen::Index>(nodes.size())) {
    throw InvalidParameter("solve_half: trace data length does not match interface nodes");
  }
  if (alpha_sweep.empty()) throw InvalidParameter("solve_half: empty regularization sweep");
  if (config.n_max < 1) throw InvalidParameter("solve_half: n_max must be >= 1");
  for (double a : alpha_sweep) {
    if (!(a > 0.0)) throw InvalidParameter("solve_half: sweep values must be > 0");
  }

  // Freeze one contour for every solve in this call; it depends only on the
  // medium and k2, never on the source.
  if (!config.use_explicit_contour) {
    const auto diagram = compute_diagram(disc, config.n_alpha, config.n_bands, config.threads);
    const auto crossings = find_crossings(diagram, disc, config.k2);
    config.explicit_contour = build_contour(crossings, disc, config.k2, config.delta_policy);
    config.use_explicit_contour = true;
  }

  const MatC phi_mat = build_trace_matrix(disc, basis, config);
  const SpMatR trace_mass = interface_mass_matrix(disc.mesh);
  const double phi_norm = l2_norm(trace_mass, phi.values);
  const double denom = phi_norm > 0.0 ? phi_norm : 1.0;

  HalfGuideResult res;
  res.sweep_alphas.reserve(alpha_sweep.size());
  res.sweep_mismatches.reserve(alpha_sweep.size());
  std::size_t best = 0;
  std::vector<TikhonovResult> fits;
  fits.reserve(alpha_sweep.size());
  for (std::size_t i = 0; i < alpha_sweep.size(); ++i) {
    // The trace of the recovered source's solution is Phi c by linearity,
    // so the sweep needs no additional guide solves.
    fits.push_back(tikhonov_solve(phi_mat, trace_mass, phi.values, alpha_sweep[i]));
    const double mismatch = fits.back().residual / denom;
    res.sweep_alphas.push_back(alpha_sweep[i]);
    res.sweep_mismatches.push_back(mismatch);
    if (mismatch < res.sweep_mismatches[best]) best = i;
  }
  if (res.sweep_mismatches[best] > 0.5) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "solve_half: no regularization level reproduces the trace data "
                  "(best mismatch %.3e at alpha %.3e)",
                  res.sweep_mismatches[best], alpha_sweep[best]);
    throw RecoveryFailure(buf);
  }

  res.alpha_chosen = alpha_sweep[best];
  res.coefficients = fits[best].coefficients;

  const VecC c = res.coefficients;
  std::vector<ComplexField> modes;
  modes.reserve(static_cast<std::size_t>(basis.size()));
  for (int ell = 0; ell < basis.size(); ++ell) modes.push_back(basis_function(basis, ell));
  ComplexField recovered = [modes, c](double x1, double x2) -> Complex {
    Complex acc(0.0, 0.0);
    for (Eigen::Index ell = 0; ell < c.size(); ++ell) {
      acc += c[ell] * modes[static_cast<std::size_t>(ell)](x1, x2);
    }
    return acc;
  };

  SolveConfig run = config;
  run.n_min = 0;  // cell 0 carries the interface trace for the mismatch report
  LapSolution full = solve_full(with_source(disc, recovered), run);

  VecC trace(phi.values.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    trace[static_cast<Eigen::Index>(i)] = full.cell(0)[nodes[i]];
  }
  res.gamma1_mismatch = l2_norm(trace_mass, VecC(trace - phi.values)) / denom;

  full.cells.erase(full.cells.begin());
  full.n_min = 1;
  res.solution = std::move(full);
  return res;
}

}  // namespace periwave
