#pragma once

// Small dense complex linear algebra: LU with partial pivoting, solves,
// determinants, and linear least squares via the normal equations (the
// systems here are tiny and the working precision is huge, so the normal
// equations are more than adequate).

#include <vector>

#include "hopfsplit/mp/errors.hpp"
#include "hopfsplit/mp/vec.hpp"

namespace hopfsplit {

class DenseMatrix {
  public:
    DenseMatrix(int rows, int cols, prec_t prec)
        : r_(rows), c_(cols),
          a_(static_cast<size_t>(rows) * static_cast<size_t>(cols), Complex::zero(prec)) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    Complex& at(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Complex& at(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

  private:
    int r_, c_;
    std::vector<Complex> a_;
};

// Solves A x = b in place of a copy; throws ConditioningError on (near-)zero pivot.
std::vector<Complex> lu_solve(DenseMatrix A, std::vector<Complex> b);

// Least squares min ||A x - b||_2 via normal equations A^H A x = A^H b.
std::vector<Complex> least_squares(const DenseMatrix& A, const std::vector<Complex>& b);

// Roots of a monic-normalizable polynomial sum c_k z^k (c.back() != 0) by
// Durand-Kerner iteration at full precision. Used for Pade denominator poles.
std::vector<Complex> poly_roots(const std::vector<Complex>& coeffs, int max_iter = 200);

} // namespace hopfsplit
