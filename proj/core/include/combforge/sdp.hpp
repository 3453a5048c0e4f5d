#ifndef COMBFORGE_SDP_HPP
#define COMBFORGE_SDP_HPP

#include <string>
#include <vector>

#include "combforge/matrix.hpp"

namespace combforge {

// Sparse entry of a Hermitian coefficient operator (both triangles stored).
struct SparseEntry {
  Index r;
  Index c;
  Complex v;
};

using SparseHermitian = std::vector<SparseEntry>;

// Orthonormal Hermitian basis of d x d matrices (generalized Gell-Mann):
// identity/sqrt(d), the d-1 diagonal elements, then the symmetric and
// antisymmetric pairs in (a, b) order.
std::vector<SparseHermitian> hermitian_basis(Index d);

struct SdpBlock {
  std::string label;
  Index dim;
};

struct SdpTerm {
  std::size_t block;
  SparseHermitian coeff;
};

// One scalar equality: sum_b <coeff_b, X_b> = rhs.
struct SdpConstraint {
  std::vector<SdpTerm> terms;
  double rhs = 0.0;
};

// Block-structured Hermitian SDP: maximize sum_b <C_b, X_b> over PSD blocks
// X_b subject to the scalar equalities (each an expansion of an operator
// equality in an orthonormal Hermitian basis).
class SdpProblem {
 public:
  std::size_t add_block(std::string label, Index dim);
  std::size_t block_index(const std::string& label) const;

  void set_objective(std::size_t block, Matrix c);
  void add_constraint(SdpConstraint c);

  const std::vector<SdpBlock>& blocks() const { return blocks_; }
  const std::vector<Matrix>& objective() const { return objective_; }
  const std::vector<SdpConstraint>& constraints() const { return constraints_; }

 private:
  std::vector<SdpBlock> blocks_;
  std::vector<Matrix> objective_;
  std::vector<SdpConstraint> constraints_;
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iter, singular };

std::string to_string(SdpStatus s);

struct SdpResiduals {
  double primal_eq = 0.0;   // ||A(X) - b||_2 / (1 + ||b||_2)
  double dual_ineq = 0.0;   // dual feasibility violation
  double psd_min_eig = 0.0; // most negative primal eigenvalue (0 if none)
};

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iter;
  std::vector<Matrix> primal_blocks;  // complex Hermitian, de-realified
  RVector dual_multipliers;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // relative duality gap
  SdpResiduals residuals;
  int iterations = 0;
  double condition_estimate = 0.0;
};

struct SolveOptions {
  double gap_tol_abs = 1e-9;
  double gap_tol_rel = 1e-7;
  double res_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  Index max_real_dim = 1024;  // total real dimension cap after realification
};

// Infeasible-start primal-dual path following with the HKM direction and
// Mehrotra-style centering.  The complex Hermitian problem is realified to a
// real symmetric one with the 1/2 inner-product correction; solutions are
// de-realified by block averaging.
SdpSolution solve(const SdpProblem& p, const SolveOptions& opts = {});

struct SdpHealth {
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double weak_duality_violation = 0.0;  // max(0, primal - dual) for max form
};

SdpHealth health(const SdpSolution& s);

}  // namespace combforge

#endif
