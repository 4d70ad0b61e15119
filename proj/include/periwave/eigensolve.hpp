#pragma once

#include <vector>

#include "periwave/types.hpp"

namespace periwave {

struct EigenPair {
  double value;
  VecC vector;  // B-normalized
};

// Generalized Hermitian eigenproblem A v = mu B v with B positive definite.
// Dense solve when the dimension is small, otherwise shift-invert Lanczos in
// the B-inner product with full reorthogonalization; every returned pair is
// verified against ||A v - mu B v|| <= tol * ||A v|| and the solve restarts
// with a larger subspace if verification fails.
//
// lowest_eigenpairs needs sigma strictly below the whole spectrum (so that
// A - sigma B is positive definite); eigenpairs_near returns the n_eigs
// eigenvalues closest to sigma for an arbitrary (nonsingular) interior shift.
std::vector<EigenPair> lowest_eigenpairs(const SpMatC& A, const SpMatR& B, int n_eigs,
                                         double sigma, std::uint64_t seed);

std::vector<EigenPair> eigenpairs_near(const SpMatC& A, const SpMatR& B, int n_eigs,
                                       double sigma, std::uint64_t seed);

// Dense fallback used for small problems and as the ground truth in tests.
std::vector<double> dense_eigenvalues(const MatC& A, const MatR& B);

}  // namespace periwave
