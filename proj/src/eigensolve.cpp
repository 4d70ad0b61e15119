#include "periwave/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "periwave/errors.hpp"

namespace periwave {

std::vector<double> dense_eigenvalues(const MatC& A, const MatR& B) {
  Eigen::GeneralizedSelfAdjointEigenSolver<MatC> es(A, B.cast<Complex>(),
                                                    Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("dense generalized eigensolve failed");
  std::vector<double> out(static_cast<std::size_t>(es.eigenvalues().size()));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
  return out;
}

namespace {

// Shift-invert operator (A - sigma B)^{-1} applied through a direct
// factorization; Cholesky when the shifted matrix is definite, LU otherwise.
class ShiftedSolver {
 public:
  ShiftedSolver(const SpMatC& A, const SpMatR& B, double sigma, bool definite) {
    SpMatC S = A - Complex(sigma) * B.cast<Complex>();
    S.makeCompressed();
    if (definite) {
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMatC, Eigen::Lower>>();
      ldlt_->compute(S);
      if (ldlt_->info() == Eigen::Success) {
        ok_ldlt_ = true;
        return;
      }
      ldlt_.reset();
    }
    lu_ = std::make_unique<Eigen::SparseLU<SpMatC>>();
    lu_->analyzePattern(S);
    lu_->factorize(S);
    if (lu_->info() != Eigen::Success)
      throw NumericalFailure("shifted matrix is singular; move the shift");
  }

  VecC solve(const VecC& x) const {
    if (ok_ldlt_) return ldlt_->solve(x);
    return lu_->solve(x);
  }

 private:
  std::unique_ptr<Eigen::SimplicialLDLT<SpMatC, Eigen::Lower>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMatC>> lu_;
  bool ok_ldlt_ = false;
};

VecC seeded_start(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VecC x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = u(rng), im = u(rng);
    x[i] = Complex(re, im);
  }
  return x;
}

struct LanczosResult {
  std::vector<double> theta;  // Ritz values of (A - sigma B)^{-1} B
  std::vector<VecC> vectors;  // Ritz vectors
  std::vector<double> subspace_residual;
};

LanczosResult lanczos_shift_invert(const ShiftedSolver& op, const SpMatR& B, int m,
                                   std::uint64_t seed) {
  const Eigen::Index n = B.rows();
  m = static_cast<int>(std::min<Eigen::Index>(m, n));
  std::vector<VecC> V;
  V.reserve(static_cast<std::size_t>(m) + 1);
  std::vector<VecC> BV;  // cache B v_j
  BV.reserve(static_cast<std::size_t>(m) + 1);
  std::vector<double> alpha, beta;

  VecC v = seeded_start(n, seed);
  VecC bv = B * v;
  double nb = std::sqrt(std::abs(v.dot(bv).real()));
  v /= nb;
  bv /= nb;
  V.push_back(v);
  BV.push_back(bv);

  for (int j = 0; j < m; ++j) {
    VecC w = op.solve(BV[static_cast<std::size_t>(j)]);
    const double a = BV[static_cast<std::size_t>(j)].dot(w).real();  // <v_j, C v_j>_B
    alpha.push_back(a);
    w -= a * V[static_cast<std::size_t>(j)];
    if (j > 0) w -= beta[static_cast<std::size_t>(j - 1)] * V[static_cast<std::size_t>(j - 1)];
    // Full B-reorthogonalization (twice) keeps Ritz values trustworthy.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < V.size(); ++i) {
        const Complex c = BV[i].dot(w);  // conj(Bv_i) . w = <v_i, w>_B
        w -= c * V[i];
      }
    VecC bw = B * w;
    const double b = std::sqrt(std::max(0.0, w.dot(bw).real()));
    beta.push_back(b);
    if (b < 1e-13 || j == m - 1) break;
    V.push_back(w / b);
    BV.push_back(bw / b);
  }

  LanczosResult out;
  const int k = static_cast<int>(alpha.size());
  MatR T = MatR::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    T(j, j) = alpha[static_cast<std::size_t>(j)];
    if (j + 1 < k) {
      T(j, j + 1) = beta[static_cast<std::size_t>(j)];
      T(j + 1, j) = beta[static_cast<std::size_t>(j)];
    }
  }
  Eigen::SelfAdjointEigenSolver<MatR> es(T);
  const double beta_last = beta[static_cast<std::size_t>(k - 1)];
  for (int i = 0; i < k; ++i) {
    out.theta.push_back(es.eigenvalues()[i]);
    VecC y = VecC::Zero(n);
    for (int j = 0; j < k; ++j) y += es.eigenvectors()(j, i) * V[static_cast<std::size_t>(j)];
    out.vectors.push_back(std::move(y));
    out.subspace_residual.push_back(std::abs(beta_last * es.eigenvectors()(k - 1, i)));
  }
  return out;
}

double pair_residual(const SpMatC& A, const SpMatR& B, double mu, const VecC& v) {
  const VecC av = A * v.eval();
  const VecC bv = B * v;
  const double denom = av.norm();
  if (denom == 0.0) return 0.0;
  return (av - mu * bv).norm() / denom;
}

std::vector<EigenPair> shift_invert_eigs(const SpMatC& A, const SpMatR& B, int n_eigs,
                                         double sigma, bool definite, bool nearest_only,
                                         std::uint64_t seed) {
  if (n_eigs < 1)
    throw InvalidParameter("eigensolver needs n_eigs >= 1");
  const double tol = 1e-8;
  int m = std::max(2 * n_eigs + 20, 30);
  for (int attempt = 0; attempt < 3; ++attempt) {
    ShiftedSolver op(A, B, sigma, definite);
    auto lr = lanczos_shift_invert(op, B, m, seed + static_cast<std::uint64_t>(attempt));
    // Convert theta -> mu = sigma + 1/theta and pick candidates.
    struct Cand { double mu; double score; std::size_t idx; };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < lr.theta.size(); ++i) {
      const double th = lr.theta[i];
      if (std::abs(th) < 1e-14) continue;
      const double mu = sigma + 1.0 / th;
      if (nearest_only)
        cands.push_back({mu, std::abs(mu - sigma), i});
      else if (th > 0.0)  // mu > sigma: the low end when sigma is below the spectrum
        cands.push_back({mu, mu, i});
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.score < b.score; });
    std::vector<EigenPair> out;
    bool all_ok = true;
    for (const auto& c : cands) {
      if (static_cast<int>(out.size()) == n_eigs) break;
      if (pair_residual(A, B, c.mu, lr.vectors[c.idx]) > tol) {
        all_ok = false;
        break;
      }
      out.push_back({c.mu, lr.vectors[c.idx]});
    }
    if (all_ok && static_cast<int>(out.size()) == n_eigs) {
      std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
      return out;
    }
    m += 40;  // subspace was too small or not converged; retry larger
  }
  throw NumericalFailure("Lanczos eigensolve failed to converge after restarts");
}

}  // namespace

std::vector<EigenPair> lowest_eigenpairs(const SpMatC& A, const SpMatR& B, int n_eigs,
                                         double sigma, std::uint64_t seed) {
  return shift_invert_eigs(A, B, n_eigs, sigma, /*definite=*/true, /*nearest_only=*/false, seed);
}

std::vector<EigenPair> eigenpairs_near(const SpMatC& A, const SpMatR& B, int n_eigs,
                                       double sigma, std::uint64_t seed) {
  return shift_invert_eigs(A, B, n_eigs, sigma, /*definite=*/false, /*nearest_only=*/true, seed);
}

}  // namespace periwave
