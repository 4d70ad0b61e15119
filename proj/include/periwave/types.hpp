#pragma once

#include <complex>
#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace periwave {

using Complex = std::complex<double>;
using VecR = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using SpMatR = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;
using TripletR = Eigen::Triplet<double>;
using TripletC = Eigen::Triplet<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

// z^n for integer n by repeated multiplication; branch-free and exact for the
// small cell indices used throughout.
inline Complex int_pow(Complex z, long n) {
  if (n == 0) return Complex(1.0, 0.0);
  bool neg = n < 0;
  unsigned long e = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  Complex base = z, acc(1.0, 0.0);
  while (e) {
    if (e & 1UL) acc *= base;
    base *= base;
    e >>= 1UL;
  }
  return neg ? Complex(1.0, 0.0) / acc : acc;
}

}  // namespace periwave
