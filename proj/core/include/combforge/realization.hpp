#ifndef COMBFORGE_REALIZATION_HPP
#define COMBFORGE_REALIZATION_HPP

#include "combforge/strategy.hpp"

namespace combforge {

// A strategy implemented as a pure initial memory state plus one unitary per
// turn on memory (x) input -> output (x) memory, discarding the final memory.
// Memory registers are labeled "#m0".."#mn".
struct UnitaryRealization {
  ComplexMatrix v;                        // unit column on Z_0
  std::vector<Index> memory_dims;         // z_0..z_n
  std::vector<ComplexMatrix> unitaries;   // U_k: (#m{k-1}, X_k) -> (Y_k, #mk)
  RoundStructure rounds;
};

// Checks unitarity, the dimension chain z_{k-1} x_k = z_k y_k, and the norm
// of v; throws on violation.
void check_realization(const UnitaryRealization& r);

// Builds a realization of a validated strategy via purification matching:
// psi_k = vec(X_k^{1/2}), connecting isometries from pinv-matricizations,
// memories padded to z_k = prod(y) * prod_{i>k}(y_i) * prod_{i<=k}(x_i).
UnitaryRealization unitary_realization(const StrategyOperator& s);

// J of the channel implemented by the realization; always a valid strategy
// operator regardless of which unitaries are supplied.
StrategyOperator recompose_realization(const UnitaryRealization& r);

// The time-reversed realization: initial memory state `w` on Z_n, unitaries
// U_k^T (entrywise transpose) with factor orders swapped back to the
// (memory, input) -> (output, memory) convention.
UnitaryRealization transpose_realization(const UnitaryRealization& r,
                                         const ComplexMatrix& w);

}  // namespace combforge

#endif
