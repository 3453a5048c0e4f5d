#ifndef COMBFORGE_REVERSAL_HPP
#define COMBFORGE_REVERSAL_HPP

#include "combforge/realization.hpp"
#include "combforge/sdp.hpp"

namespace combforge {

enum class ReversalMode { maximize, match };

struct ReversalResult {
  StrategyOperator reversed;  // on the reversed round structure
  ComplexMatrix w;            // unit column on Z_n
  double forward_value = 0.0;
  double reversed_value = 0.0;
  ReversalMode mode = ReversalMode::maximize;
};

// The operator A: Z_0 -> Z_n contracting the conjugated coefficients of u
// through the realization's unitaries; <u u*, X> = ||A v||^2.
ComplexMatrix build_A(const UnitaryRealization& r, const ComplexMatrix& u);

// Selects the reversed initial state from the spectrum of conj(A) A^T:
// maximize -> top eigenvector; match -> interpolation between the extremal
// eigenvectors hitting `target` exactly.
ComplexMatrix choose_w(const ComplexMatrix& a, double target,
                       ReversalMode mode);

// The time-reversal construction: reversed strategy J(Theta_n) from the
// transposed realization, both values recomputed by direct pairing.
ReversalResult reverse_strategy(const UnitaryRealization& r,
                                const ComplexMatrix& u, ReversalMode mode);

struct CorollaryResult {
  double forward_opt = 0.0;
  double reversed_opt = 0.0;
  SdpSolution forward_solution;
  SdpSolution reversed_solution;
};

// Two independent strategy-SDP solves: max <u u*, X> over the forward rounds
// and max <W u u* W*, Y> over the reversed rounds.
CorollaryResult corollary_check(const ComplexMatrix& u,
                                const RoundStructure& rounds,
                                const SolveOptions& opts = {});

}  // namespace combforge

#endif
