#include "combforge/matrix.hpp"

#include <stdexcept>

#include "combforge/conventions.hpp"

namespace combforge {

ComplexMatrix::ComplexMatrix(Layout rows_, Layout cols_, Matrix m_)
    : rows(std::move(rows_)), cols(std::move(cols_)), m(std::move(m_)) {
  if (m.rows() != rows.total_dim() || m.cols() != cols.total_dim()) {
    throw std::invalid_argument("ComplexMatrix: entry count " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) +
                                " does not match layouts " + rows.to_string() +
                                " x " + cols.to_string());
  }
}

ComplexMatrix ComplexMatrix::identity(const Layout& layout) {
  return {layout, layout,
          Matrix::Identity(layout.total_dim(), layout.total_dim())};
}

ComplexMatrix ComplexMatrix::zero(const Layout& rows_, const Layout& cols_) {
  return {rows_, cols_, Matrix::Zero(rows_.total_dim(), cols_.total_dim())};
}

ComplexMatrix ComplexMatrix::scalar(Complex value) {
  Matrix m(1, 1);
  m(0, 0) = value;
  return {Layout{}, Layout{}, std::move(m)};
}

ComplexMatrix ComplexMatrix::column(const Layout& layout, CVector v) {
  if (v.size() != layout.total_dim()) {
    throw std::invalid_argument("ComplexMatrix::column: size mismatch");
  }
  return {layout, Layout{}, v};
}

HermitianOperator::HermitianOperator(Layout layout, const Matrix& m)
    : layout_(std::move(layout)) {
  if (m.rows() != m.cols() || m.rows() != layout_.total_dim()) {
    throw std::invalid_argument("HermitianOperator: shape " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) +
                                " does not match layout " +
                                layout_.to_string());
  }
  const double scale = max_abs(m);
  const double residual = max_abs(m - m.adjoint());
  if (residual > kHermTolFactor * std::max(scale, 1e-300)) {
    throw std::invalid_argument(
        "HermitianOperator: hermiticity residual " + std::to_string(residual) +
        " exceeds tolerance");
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianOperator HermitianOperator::identity(const Layout& layout) {
  HermitianOperator h;
  h.layout_ = layout;
  h.m_ = Matrix::Identity(layout.total_dim(), layout.total_dim());
  return h;
}

HermitianOperator HermitianOperator::zero(const Layout& layout) {
  HermitianOperator h;
  h.layout_ = layout;
  h.m_ = Matrix::Zero(layout.total_dim(), layout.total_dim());
  return h;
}

HermitianOperator HermitianOperator::from_symmetrized(Layout layout,
                                                      const Matrix& m) {
  HermitianOperator h;
  h.layout_ = std::move(layout);
  h.m_ = 0.5 * (m + m.adjoint().eval());
  return h;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double frobenius(const Matrix& m) { return m.norm(); }

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) {
    throw std::invalid_argument("hs_inner: layout mismatch " +
                                a.rows.to_string() + " vs " +
                                b.rows.to_string());
  }
  return (a.m.adjoint() * b.m).trace();
}

double hs_inner_real(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.layout() != b.layout()) {
    throw std::invalid_argument("hs_inner_real: layout mismatch " +
                                a.layout().to_string() + " vs " +
                                b.layout().to_string());
  }
  return (a.matrix().adjoint() * b.matrix()).trace().real();
}

ComplexMatrix dagger(const ComplexMatrix& a) {
  return {a.cols, a.rows, a.m.adjoint()};
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  return {a.rows, a.cols, a.m.conjugate()};
}

HermitianOperator conjugate(const HermitianOperator& a) {
  return HermitianOperator::from_symmetrized(a.layout(),
                                             a.matrix().conjugate());
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols.total_dim() != b.rows.total_dim()) {
    throw std::invalid_argument("matmul: inner dimension mismatch");
  }
  return {a.rows, b.cols, a.m * b.m};
}

}  // namespace combforge
