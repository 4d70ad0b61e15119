#include "periwave/cell_system.hpp"

#include <cmath>

#include "periwave/errors.hpp"

namespace periwave {

namespace {

// Degree-5 rule on the reference triangle, weights normalized to sum 1.
struct TriangleRule {
  std::array<std::array<double, 3>, 7> lambda;
  std::array<double, 7> weight;
};

TriangleRule degree5_rule() {
  TriangleRule r;
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
  r.lambda[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  r.weight[0] = 9.0 / 40.0;
  int idx = 1;
  for (int i = 0; i < 3; ++i, ++idx) {
    std::array<double, 3> l{a1, a1, a1};
    l[static_cast<std::size_t>(i)] = 1.0 - 2.0 * a1;
    r.lambda[static_cast<std::size_t>(idx)] = l;
    r.weight[static_cast<std::size_t>(idx)] = w1;
  }
  for (int i = 0; i < 3; ++i, ++idx) {
    std::array<double, 3> l{a2, a2, a2};
    l[static_cast<std::size_t>(i)] = 1.0 - 2.0 * a2;
    r.lambda[static_cast<std::size_t>(idx)] = l;
    r.weight[static_cast<std::size_t>(idx)] = w2;
  }
  return r;
}

}  // namespace

CellDiscretization build_cell_discretization(const UnitCellMesh& mesh, const CellProblem& problem) {
  CellDiscretization disc;
  disc.mesh = mesh;
  disc.problem = problem;
  const int nd = mesh.n_dofs;
  const auto rule = degree5_rule();
  disc.qp_lambda = rule.lambda;

  const std::size_t ne = mesh.triangles.size();
  disc.elem_dofs.resize(ne);
  disc.qp_x1.resize(7 * ne);
  disc.qp_fw.resize(7 * ne);

  std::vector<TripletR> tK, tE, tM, tMq;
  tK.reserve(ne * 9);
  tE.reserve(ne * 9);
  tM.reserve(ne * 9);
  tMq.reserve(ne * 9);

  for (std::size_t e = 0; e < ne; ++e) {
    const auto& tri = mesh.triangles[e];
    const double x0 = mesh.x1(tri[0]), y0 = mesh.x2(tri[0]);
    const double x1 = mesh.x1(tri[1]), y1 = mesh.x2(tri[1]);
    const double x2 = mesh.x1(tri[2]), y2 = mesh.x2(tri[2]);
    const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    const double area = 0.5 * std::abs(det);
    // grad lambda_a = (b_a, c_a) / det
    const double bg[3] = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
    const double cg[3] = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};

    std::array<int, 3> dofs;
    for (int a = 0; a < 3; ++a)
      dofs[static_cast<std::size_t>(a)] = mesh.dof_map[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
    disc.elem_dofs[e] = dofs;

    // Quadrature-point positions, q values, f values.
    double qw[7];
    std::array<double, 7> px, py;
    for (int qp = 0; qp < 7; ++qp) {
      const auto& l = rule.lambda[static_cast<std::size_t>(qp)];
      px[static_cast<std::size_t>(qp)] = l[0] * x0 + l[1] * x1 + l[2] * x2;
      py[static_cast<std::size_t>(qp)] = l[0] * y0 + l[1] * y1 + l[2] * y2;
      qw[qp] = rule.weight[static_cast<std::size_t>(qp)] * area;
      disc.qp_x1[7 * e + static_cast<std::size_t>(qp)] = px[static_cast<std::size_t>(qp)];
      disc.qp_fw[7 * e + static_cast<std::size_t>(qp)] =
          qw[qp] * problem.f(px[static_cast<std::size_t>(qp)], py[static_cast<std::size_t>(qp)]);
    }

    for (int a = 0; a < 3; ++a) {
      const int ia = dofs[static_cast<std::size_t>(a)];
      for (int b = 0; b < 3; ++b) {
        const int jb = dofs[static_cast<std::size_t>(b)];
        const double k_ab = area * (bg[a] * bg[b] + cg[a] * cg[b]);
        // E_ab = int phi_b d1 phi_a = d1 phi_a * area / 3
        const double e_ab = bg[a] * area / 3.0;
        const double m_ab = area * (a == b ? 1.0 / 6.0 : 1.0 / 12.0);
        double mq_ab = 0.0;
        for (int qp = 0; qp < 7; ++qp) {
          const auto& l = rule.lambda[static_cast<std::size_t>(qp)];
          mq_ab += qw[qp] *
                   disc.problem.q(px[static_cast<std::size_t>(qp)], py[static_cast<std::size_t>(qp)]) *
                   l[static_cast<std::size_t>(a)] * l[static_cast<std::size_t>(b)];
        }
        tK.emplace_back(ia, jb, k_ab);
        tE.emplace_back(ia, jb, e_ab);
        tM.emplace_back(ia, jb, m_ab);
        tMq.emplace_back(ia, jb, mq_ab);
      }
    }
  }

  disc.stiffness.resize(nd, nd);
  disc.stiffness.setFromTriplets(tK.begin(), tK.end());
  SpMatR E(nd, nd);
  E.setFromTriplets(tE.begin(), tE.end());
  disc.transport = E - SpMatR(E.transpose());
  disc.mass.resize(nd, nd);
  disc.mass.setFromTriplets(tM.begin(), tM.end());
  disc.mass_q.resize(nd, nd);
  disc.mass_q.setFromTriplets(tMq.begin(), tMq.end());
  disc.stiffness.makeCompressed();
  disc.transport.makeCompressed();
  disc.mass.makeCompressed();
  disc.mass_q.makeCompressed();

  disc.vertex_mass = vertex_mass_matrix(mesh);
  return disc;
}

CellDiscretization with_source(const CellDiscretization& disc, const ComplexField& source) {
  CellDiscretization out = disc;
  out.problem.f = source;
  const auto rule = degree5_rule();
  const auto& mesh = out.mesh;
  for (std::size_t e = 0; e < out.elem_dofs.size(); ++e) {
    const auto& tri = mesh.triangles[e];
    const double x0 = mesh.x1(tri[0]), y0 = mesh.x2(tri[0]);
    const double x1 = mesh.x1(tri[1]), y1 = mesh.x2(tri[1]);
    const double x2 = mesh.x1(tri[2]), y2 = mesh.x2(tri[2]);
    const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    const double area = 0.5 * std::abs(det);
    for (int qp = 0; qp < 7; ++qp) {
      const auto& l = rule.lambda[static_cast<std::size_t>(qp)];
      const double px = l[0] * x0 + l[1] * x1 + l[2] * x2;
      const double py = l[0] * y0 + l[1] * y1 + l[2] * y2;
      out.qp_x1[7 * e + static_cast<std::size_t>(qp)] = px;
      out.qp_fw[7 * e + static_cast<std::size_t>(qp)] =
          rule.weight[static_cast<std::size_t>(qp)] * area * source(px, py);
    }
  }
  return out;
}

namespace {

// The four matrices come from identical triplet patterns, so their
// compressed layouts coincide; combine value arrays in one pass. transport
// is E - E^T whose pattern is the same symmetric element pattern.
void check_aligned(const SpMatR& a, const SpMatR& b) {
  if (a.nonZeros() != b.nonZeros())
    throw AssumptionViolated("cell matrices lost pattern alignment");
}

}  // namespace

SpMatC assemble_cell_matrix(const CellDiscretization& disc, Complex z, Complex k2) {
  if (z == Complex(0.0, 0.0))
    throw InvalidParameter("spectral parameter z must be nonzero");
  check_aligned(disc.stiffness, disc.transport);
  check_aligned(disc.stiffness, disc.mass);
  check_aligned(disc.stiffness, disc.mass_q);
  const Complex lz = std::log(z);
  const Complex lz2 = lz * lz;
  SpMatC A = disc.stiffness.cast<Complex>();
  A.makeCompressed();
  const auto n = A.nonZeros();
  Complex* av = A.valuePtr();
  const double* sv = disc.transport.valuePtr();
  const double* mv = disc.mass.valuePtr();
  const double* mqv = disc.mass_q.valuePtr();
  for (Eigen::Index i = 0; i < n; ++i)
    av[i] += lz * sv[i] - k2 * mqv[i] - lz2 * mv[i];
  return A;
}

VecC assemble_cell_rhs(const CellDiscretization& disc, Complex z) {
  if (z == Complex(0.0, 0.0))
    throw InvalidParameter("spectral parameter z must be nonzero");
  const Complex lz = std::log(z);
  VecC rhs = VecC::Zero(disc.n_dofs());
  const std::size_t ne = disc.elem_dofs.size();
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& dofs = disc.elem_dofs[e];
    for (int qp = 0; qp < 7; ++qp) {
      const Complex fw = disc.qp_fw[7 * e + static_cast<std::size_t>(qp)];
      if (fw == Complex(0.0, 0.0)) continue;
      const Complex c = -fw * std::exp(-lz * disc.qp_x1[7 * e + static_cast<std::size_t>(qp)]);
      const auto& l = disc.qp_lambda[static_cast<std::size_t>(qp)];
      for (int a = 0; a < 3; ++a)
        rhs[dofs[static_cast<std::size_t>(a)]] += c * l[static_cast<std::size_t>(a)];
    }
  }
  return rhs;
}

MatC dense_bloch_matrix(const CellDiscretization& disc, double alpha) {
  const Complex ia(0.0, alpha);
  MatC A = disc.stiffness.cast<Complex>().toDense();
  A += ia * disc.transport.cast<Complex>().toDense();
  A += (alpha * alpha) * disc.mass.cast<Complex>().toDense();
  return A;
}

SpMatC sparse_bloch_matrix(const CellDiscretization& disc, double alpha) {
  check_aligned(disc.stiffness, disc.transport);
  check_aligned(disc.stiffness, disc.mass);
  const Complex ia(0.0, alpha);
  SpMatC A = disc.stiffness.cast<Complex>();
  A.makeCompressed();
  const auto n = A.nonZeros();
  Complex* av = A.valuePtr();
  const double* sv = disc.transport.valuePtr();
  const double* mv = disc.mass.valuePtr();
  for (Eigen::Index i = 0; i < n; ++i)
    av[i] += ia * sv[i] + (alpha * alpha) * mv[i];
  return A;
}

VecC vertex_field_from_dofs(const CellDiscretization& disc, const VecC& dof_values, Complex z) {
  const Complex lz = std::log(z);
  VecC w(disc.mesh.n_vertices());
  for (int v = 0; v < disc.mesh.n_vertices(); ++v) {
    const int dof = disc.mesh.dof_map[static_cast<std::size_t>(v)];
    w[v] = std::exp(lz * disc.mesh.x1(v)) * dof_values[dof];
  }
  return w;
}

}  // namespace periwave
