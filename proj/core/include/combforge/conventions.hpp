#ifndef COMBFORGE_CONVENTIONS_HPP
#define COMBFORGE_CONVENTIONS_HPP

// Conventions used consistently across the whole library.  Everything that
// depends on an index-ordering choice is derived from the single vec
// convention below, so this file is the one place where the choices live.
//
// vec (row-major):   vec(|a><b|) = |a>|b>, extended linearly.  Consequently
//                    vec(ABC) = (A (x) C^T) vec(B).
//
// Kronecker:         (A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l].  The composite
//                    row index is i*rows(B)+k, matching row-major vec.
//
// Choi matrix:       J(Phi) = sum_{a,b} Phi(|a><b|) (x) |a><b|, so the output
//                    factors come first and J(Phi) = sum_i vec(K_i) vec(K_i)*
//                    for any Kraus representation {K_i}.
//
// Strategy operator: lives on (Y_1..Y_n, X_1..X_n) -- all outputs first, then
//                    all inputs, each group in round order.
//
// Realization step:  U_k maps Z_{k-1} (x) X_k -> Y_k (x) Z_k (memory left of
//                    the input, output left of the memory).  The time-reversed
//                    realization uses entrywise transposes U_k^T conjugated by
//                    the factor swaps needed to restore this ordering.
//
// Purification side: the connecting isometry of round k acts on the physical
//                    pair (Z_{k-1}, X_k) directly; no conjugation is applied
//                    to the X_k factor.  This is the convention under which
//                    recompose_realization(unitary_realization(X)) == X.
//
// Eigendecomposition: eigenvalues descending; each eigenvector is scaled so
//                    its first component of magnitude > 1e-12 * max is real
//                    and positive.  Ties therefore resolve deterministically.

namespace combforge {

// Hermiticity check tolerance, relative to the max-abs entry.
inline constexpr double kHermTolFactor = 1e-12;

// Eigenvalues above -kPsdTolFactor * lambda_max are clipped to zero before
// square roots and fidelities; anything below is an error.
inline constexpr double kPsdTolFactor = 1e-9;

// Kraus extraction drops Choi eigenvalues <= this times the top eigenvalue.
inline constexpr double kKrausRankTolFactor = 1e-10;

// Singular values <= this times sigma_max are treated as zero in pinv.
inline constexpr double kPinvRankTolFactor = 1e-10;

// Channel trace-preservation / unitality residual cap.
inline constexpr double kChannelTol = 1e-9;

// Strategy marginal-hierarchy residual cap, relative to ||X_k||_F.
inline constexpr double kFeasibilityTol = 1e-8;

// Gram residual above which complete_isometry rejects its input.
inline constexpr double kOrthonormTol = 1e-10;

// Unitarity residual cap for realization factors.
inline constexpr double kUnitaryTol = 1e-10;

}  // namespace combforge

#endif
