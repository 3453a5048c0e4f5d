#ifndef COMBFORGE_STRATEGY_SDP_HPP
#define COMBFORGE_STRATEGY_SDP_HPP

#include "combforge/sdp.hpp"
#include "combforge/strategy.hpp"

namespace combforge {

// The n-turn strategy SDP (primal): blocks X_1..X_n, constraints
// Tr_{Y_k}(X_k) = X_{k-1} (x) I_{X_k} and Tr_{Y_1}(X_1) = I, objective
// <H, X_n>.  Family k's scalar constraints sit at
// [family_offset[k-1], family_offset[k-1] + dim(family_space[k-1])^2).
struct StrategySdp {
  SdpProblem problem;
  std::vector<std::size_t> family_offset;
  std::vector<Layout> family_space;
};

StrategySdp build_strategy_primal(const HermitianOperator& h,
                                  const RoundStructure& rounds);

// The dual of the Figure: minimize Tr(Y_1) over the cascade
// Y_n (x) I >= H, Y_{k-1} (x) I >= Tr_{X_k}(Y_k).  Encoded in the solver's
// max form with Y_k split into PSD parts and slack blocks; the dual optimum
// is minus the solved maximum.
SdpProblem build_strategy_dual(const HermitianOperator& h,
                               const RoundStructure& rounds);

struct StrategyOptimum {
  double value = 0.0;
  StrategyOperator optimizer;
  // The Figure's dual variables Y_1..Y_n assembled from the equality
  // multipliers; Y_k lives on (Y_1..Y_{k-1}, X_1..X_k).
  std::vector<HermitianOperator> certificate;
  SdpSolution solution;
};

StrategyOptimum optimal_strategy_value(const HermitianOperator& h,
                                       const RoundStructure& rounds,
                                       const SolveOptions& opts = {},
                                       double feasibility_tol = kFeasibilityTol);

}  // namespace combforge

#endif
