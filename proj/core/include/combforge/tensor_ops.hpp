#ifndef COMBFORGE_TENSOR_OPS_HPP
#define COMBFORGE_TENSOR_OPS_HPP

#include <string>
#include <vector>

#include "combforge/matrix.hpp"

namespace combforge {

// Kronecker product following the row-major vec convention:
// out[(i,k),(j,l)] = a[i,j] b[k,l].  Label sets must be disjoint per side.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor_product(const HermitianOperator& a,
                                 const HermitianOperator& b);

// Partial trace over the given labels; survivor order preserved.
// The general form requires every traced label on both sides with equal dims.
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<std::string>& labels);
HermitianOperator partial_trace(const HermitianOperator& m,
                                const std::vector<std::string>& labels);

// Conjugation by the permutation isometry taking the current factor order to
// `target_order` (a permutation of the labels).
HermitianOperator permute_factors(const HermitianOperator& m,
                                  const std::vector<std::string>& target_order);
// Row/column sides permuted independently.
ComplexMatrix permute_rows(const ComplexMatrix& m,
                           const std::vector<std::string>& target_order);
ComplexMatrix permute_cols(const ComplexMatrix& m,
                           const std::vector<std::string>& target_order);

// The unitary W reversing the order of all tensor factors; maps `layout` to
// `layout.reversed()`.
ComplexMatrix reversal_isometry(const Layout& layout);

// Row-major vectorization: vec(|a><b|) = |a>|b>.
CVector vec(const Matrix& m);
Matrix unvec(Index rows, Index cols, const CVector& v);

// Labeled vectorization: column vector on rows ++ cols, with the column
// factors renamed (default: trailing apostrophe) to avoid label collisions.
ComplexMatrix vectorize(const ComplexMatrix& m);
ComplexMatrix vectorize(const ComplexMatrix& m,
                        const std::vector<std::string>& col_labels);

// Splits a column vector's factors into a matrix; row_labels ++ col_labels
// must be a permutation of the vector's factors.
ComplexMatrix matricize(const ComplexMatrix& v,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels);

// op (x) I on the extra factors of `target`, permuted into target order.
HermitianOperator embed(const HermitianOperator& op, const Layout& target);

// Applies U (labeled on both sides) to the matching factor group of a column
// vector; remaining factors are bystanders.  Result carries U's row factors
// followed by the bystanders.
ComplexMatrix apply_left(const ComplexMatrix& u, const ComplexMatrix& v);

Complex trace(const ComplexMatrix& m);

}  // namespace combforge

#endif
