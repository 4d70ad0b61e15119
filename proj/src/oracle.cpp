#include "periwave/oracle.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "periwave/errors.hpp"

namespace periwave {

StripDiscretization build_strip_discretization(const CellProblem& problem, int R, double h) {
  if (R < 5)
    throw InvalidParameter("strip oracle needs R >= 5");
  StripDiscretization disc;
  TruncatedStrip& strip = disc.strip;
  strip.R = R;
  strip.cell_mesh = build_structured_mesh(h);
  strip.cols_per_cell = strip.cell_mesh.n1;
  strip.n_cols = (2 * R + 1) * strip.cols_per_cell + 1;
  strip.n_rows = strip.cell_mesh.n2 + 1;
  strip.dx = 1.0 / strip.cols_per_cell;

  strip.dof_of_vertex.assign(static_cast<std::size_t>(strip.n_vertices()), -1);
  int next = 0;
  for (int j = 0; j < strip.n_rows; ++j)
    for (int i = 1; i < strip.n_cols - 1; ++i)
      strip.dof_of_vertex[static_cast<std::size_t>(strip.vertex(i, j))] = next++;
  strip.n_dofs = next;

  // Same element geometry and quadrature as the unit cell: squares split
  // along the lower-left diagonal, degree-5 rule for q and f integrals.
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
  std::array<std::array<double, 3>, 7> lam;
  std::array<double, 7> wq;
  lam[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  wq[0] = 9.0 / 40.0;
  int idx = 1;
  for (int i = 0; i < 3; ++i, ++idx) {
    lam[static_cast<std::size_t>(idx)] = {a1, a1, a1};
    lam[static_cast<std::size_t>(idx)][static_cast<std::size_t>(i)] = 1.0 - 2.0 * a1;
    wq[static_cast<std::size_t>(idx)] = w1;
  }
  for (int i = 0; i < 3; ++i, ++idx) {
    lam[static_cast<std::size_t>(idx)] = {a2, a2, a2};
    lam[static_cast<std::size_t>(idx)][static_cast<std::size_t>(i)] = 1.0 - 2.0 * a2;
    wq[static_cast<std::size_t>(idx)] = w2;
  }

  std::vector<TripletR> tK, tMq;
  disc.rhs = VecC::Zero(strip.n_dofs);
  const int nc = strip.cols_per_cell;
  const double dx = strip.dx;

  for (int j = 0; j < strip.n_rows - 1; ++j) {
    for (int gi = 0; gi < strip.n_cols - 1; ++gi) {
      const int cell_n = gi / nc - R;
      const double xl = strip.x1_of_col(gi);
      const double yb = j * dx;
      // Two triangles per square, vertices counterclockwise.
      const int va = strip.vertex(gi, j), vb = strip.vertex(gi + 1, j);
      const int vc = strip.vertex(gi + 1, j + 1), vd = strip.vertex(gi, j + 1);
      const std::array<std::array<int, 3>, 2> tris{{{va, vb, vc}, {va, vc, vd}}};
      const std::array<std::array<std::array<double, 2>, 3>, 2> coords{{
          {{{xl, yb}, {xl + dx, yb}, {xl + dx, yb + dx}}},
          {{{xl, yb}, {xl + dx, yb + dx}, {xl, yb + dx}}},
      }};
      for (int t = 0; t < 2; ++t) {
        const auto& tri = tris[static_cast<std::size_t>(t)];
        const auto& co = coords[static_cast<std::size_t>(t)];
        const double x0 = co[0][0], y0 = co[0][1];
        const double x1 = co[1][0], y1 = co[1][1];
        const double x2 = co[2][0], y2 = co[2][1];
        const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
        const double area = 0.5 * std::abs(det);
        const double bg[3] = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
        const double cg[3] = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
        // Quadrature data: q sampled with the cell-local x1, f only in cell 0.
        std::array<double, 7> qv{}, px{}, py{};
        std::array<Complex, 7> fv{};
        for (int qp = 0; qp < 7; ++qp) {
          const auto& l = lam[static_cast<std::size_t>(qp)];
          px[static_cast<std::size_t>(qp)] = l[0] * x0 + l[1] * x1 + l[2] * x2;
          py[static_cast<std::size_t>(qp)] = l[0] * y0 + l[1] * y1 + l[2] * y2;
          const double local_x1 = px[static_cast<std::size_t>(qp)] - cell_n;
          qv[static_cast<std::size_t>(qp)] = problem.q(local_x1, py[static_cast<std::size_t>(qp)]);
          fv[static_cast<std::size_t>(qp)] =
              cell_n == 0 ? problem.f(local_x1, py[static_cast<std::size_t>(qp)]) : Complex(0.0);
        }
        for (int a = 0; a < 3; ++a) {
          const int da = strip.dof_of_vertex[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
          if (da < 0) continue;
          for (int b = 0; b < 3; ++b) {
            const int db = strip.dof_of_vertex[static_cast<std::size_t>(tri[static_cast<std::size_t>(b)])];
            if (db < 0) continue;
            const double k_ab = area * (bg[a] * bg[b] + cg[a] * cg[b]);
            double mq_ab = 0.0;
            for (int qp = 0; qp < 7; ++qp)
              mq_ab += wq[static_cast<std::size_t>(qp)] * area * qv[static_cast<std::size_t>(qp)] *
                       lam[static_cast<std::size_t>(qp)][static_cast<std::size_t>(a)] *
                       lam[static_cast<std::size_t>(qp)][static_cast<std::size_t>(b)];
            tK.emplace_back(da, db, k_ab);
            tMq.emplace_back(da, db, mq_ab);
          }
          if (cell_n == 0) {
            Complex r(0.0, 0.0);
            for (int qp = 0; qp < 7; ++qp)
              r -= wq[static_cast<std::size_t>(qp)] * area * fv[static_cast<std::size_t>(qp)] *
                   lam[static_cast<std::size_t>(qp)][static_cast<std::size_t>(a)];
            disc.rhs[da] += r;
          }
        }
      }
    }
  }

  disc.stiffness.resize(strip.n_dofs, strip.n_dofs);
  disc.stiffness.setFromTriplets(tK.begin(), tK.end());
  disc.mass_q.resize(strip.n_dofs, strip.n_dofs);
  disc.mass_q.setFromTriplets(tMq.begin(), tMq.end());
  disc.stiffness.makeCompressed();
  disc.mass_q.makeCompressed();
  disc.cell_vertex_mass = vertex_mass_matrix(strip.cell_mesh);
  return disc;
}

StripSolution solve_absorbing(const StripDiscretization& disc, double k2, double epsilon) {
  if (!(epsilon > 0.0))
    throw InvalidParameter("absorbing solve needs epsilon > 0");
  const Complex k2eff(k2, epsilon);
  SpMatC A = disc.stiffness.cast<Complex>();
  A.makeCompressed();
  {
    SpMatC MqC = disc.mass_q.cast<Complex>();
    MqC.makeCompressed();
    if (A.nonZeros() != MqC.nonZeros())
      throw AssumptionViolated("strip matrices lost pattern alignment");
    Complex* av = A.valuePtr();
    const Complex* mv = MqC.valuePtr();
    for (Eigen::Index i = 0; i < A.nonZeros(); ++i) av[i] -= k2eff * mv[i];
  }

  Eigen::SparseLU<SpMatC> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw NumericalFailure("strip factorization failed");
  VecC u = lu.solve(disc.rhs);
  const double rhs_norm = disc.rhs.norm();
  double rel = rhs_norm == 0.0 ? 0.0 : (disc.rhs - A * u).norm() / rhs_norm;
  if (rel > 1e-10) {
    u += lu.solve(VecC(disc.rhs - A * u));
    rel = rhs_norm == 0.0 ? 0.0 : (disc.rhs - A * u).norm() / rhs_norm;
  }
  if (rel > 1e-10)
    throw NumericalFailure("strip solve residual " + std::to_string(rel) + " exceeds tolerance");

  StripSolution sol;
  sol.k2 = k2;
  sol.epsilon = epsilon;
  sol.R = disc.strip.R;
  sol.residual = rel;
  sol.vertex_values = VecC::Zero(disc.strip.n_vertices());
  for (int v = 0; v < disc.strip.n_vertices(); ++v) {
    const int d = disc.strip.dof_of_vertex[static_cast<std::size_t>(v)];
    if (d >= 0) sol.vertex_values[v] = u[d];
  }
  return sol;
}

VecC strip_cell_field(const StripDiscretization& disc, const StripSolution& sol, int n) {
  const TruncatedStrip& strip = disc.strip;
  if (n < -strip.R || n > strip.R)
    throw InvalidParameter("cell index outside the strip");
  const int nc = strip.cols_per_cell;
  VecC out(strip.cell_mesh.n_vertices());
  for (int j = 0; j < strip.n_rows; ++j)
    for (int i = 0; i <= nc; ++i) {
      const int gi = (n + strip.R) * nc + i;
      out[j * (nc + 1) + i] = sol.vertex_values[strip.vertex(gi, j)];
    }
  return out;
}

double strip_cell_norm(const StripDiscretization& disc, const StripSolution& sol, int n) {
  return l2_norm(disc.cell_vertex_mass, strip_cell_field(disc, sol, n));
}

VecC bloch_transform_truncated(const StripDiscretization& disc, const StripSolution& sol,
                               Complex z, int n_max) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw InvalidParameter("Bloch transform needs |z| = 1");
  if (n_max > disc.strip.R)
    throw InvalidParameter("Bloch truncation exceeds the strip half-length");
  VecC acc = VecC::Zero(disc.strip.cell_mesh.n_vertices());
  for (int n = -n_max; n <= n_max; ++n)
    acc += int_pow(z, -n) * strip_cell_field(disc, sol, n);
  return acc;
}

LapExtrapolation extrapolate_lap(const std::vector<StripSolution>& solutions) {
  if (solutions.size() != 3)
    throw InvalidParameter("extrapolation needs solutions at eps, eps/2, eps/4");
  const double e0 = solutions[0].epsilon;
  if (!(std::abs(solutions[1].epsilon - e0 / 2) < 1e-12 * e0) ||
      !(std::abs(solutions[2].epsilon - e0 / 4) < 1e-12 * e0))
    throw InvalidParameter("extrapolation nodes must be eps, eps/2, eps/4");
  const VecC& u1 = solutions[0].vertex_values;
  const VecC& u2 = solutions[1].vertex_values;
  const VecC& u3 = solutions[2].vertex_values;
  if (u1.size() != u2.size() || u2.size() != u3.size())
    throw InvalidParameter("extrapolation fields live on different strips");

  LapExtrapolation out;
  out.strip_values = {u1, u2, u3};
  // Lagrange interpolation of (eps, eps/2, eps/4) data evaluated at eps = 0.
  out.vertex_values = (1.0 / 3.0) * u1 - 2.0 * u2 + (8.0 / 3.0) * u3;
  const double d21 = (u2 - u1).norm();
  const double d32 = (u3 - u2).norm();
  out.diagnostic_ratio = d21 == 0.0 ? 0.0 : d32 / d21;
  out.reliable = out.diagnostic_ratio <= 0.9;
  return out;
}

}  // namespace periwave
