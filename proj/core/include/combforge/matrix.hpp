#ifndef COMBFORGE_MATRIX_HPP
#define COMBFORGE_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "combforge/layout.hpp"

namespace combforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Dense complex matrix with labeled row and column factor structure.
struct ComplexMatrix {
  Layout rows;
  Layout cols;
  Matrix m;

  ComplexMatrix() = default;
  ComplexMatrix(Layout rows_, Layout cols_, Matrix m_);

  static ComplexMatrix identity(const Layout& layout);
  static ComplexMatrix zero(const Layout& rows_, const Layout& cols_);
  // Scalar 1x1 with empty layouts.
  static ComplexMatrix scalar(Complex value);
  // Column vector on `layout` (empty column layout).
  static ComplexMatrix column(const Layout& layout, CVector v);

  bool is_column() const { return cols.total_dim() == 1; }
};

// Hermitian operator on a labeled tensor-product space.  On construction the
// input is checked against the hermiticity tolerance and stored as
// (M + M^dagger)/2.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(Layout layout, const Matrix& m);

  static HermitianOperator identity(const Layout& layout);
  static HermitianOperator zero(const Layout& layout);
  // Skips the hermiticity check and symmetrizes unconditionally; for
  // internal results that are Hermitian by construction.
  static HermitianOperator from_symmetrized(Layout layout, const Matrix& m);

  const Layout& layout() const { return layout_; }
  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  ComplexMatrix as_matrix() const { return {layout_, layout_, m_}; }

 private:
  Layout layout_;
  Matrix m_;
};

// ---- small numeric helpers -------------------------------------------------

double max_abs(const Matrix& m);
double frobenius(const Matrix& m);

// Hilbert-Schmidt inner product <A, B> = Tr(A^dagger B); layouts must agree.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);
double hs_inner_real(const HermitianOperator& a, const HermitianOperator& b);

ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
HermitianOperator conjugate(const HermitianOperator& a);

// Operator product; a.cols must equal b.rows.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace combforge

#endif
