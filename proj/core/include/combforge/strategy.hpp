#ifndef COMBFORGE_STRATEGY_HPP
#define COMBFORGE_STRATEGY_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "combforge/channel.hpp"

namespace combforge {

struct Round {
  std::string x_label;  // input register for this turn
  Index x_dim = 1;
  std::string y_label;  // output register
  Index y_dim = 1;
};

// The turn structure (X_k -> Y_k for k = 1..n).  All labels distinct.
class RoundStructure {
 public:
  explicit RoundStructure(std::vector<Round> rounds);

  std::size_t n() const { return rounds_.size(); }
  const std::vector<Round>& rounds() const { return rounds_; }
  const Round& round(std::size_t k) const { return rounds_.at(k); }

  // (Y_1..Y_n, X_1..X_n), the space strategy operators live on.
  Layout strategy_layout() const { return space(rounds_.size()); }
  // (Y_1..Y_k, X_1..X_k).
  Layout space(std::size_t k) const;
  Layout inputs() const;   // (X_1..X_n)
  Layout outputs() const;  // (Y_1..Y_n)
  Index input_dim() const { return inputs().total_dim(); }
  Index output_dim() const { return outputs().total_dim(); }

  // The time-reversed structure: turn j has input Y_{n+1-j}, output X_{n+1-j}.
  RoundStructure reversed() const;

 private:
  std::vector<Round> rounds_;
};

struct StrategyOperator {
  HermitianOperator op;      // on strategy_layout()
  RoundStructure rounds;
  // X_1..X_{n-1} recovered marginals, on (Y_1..Y_k, X_1..X_k).
  std::vector<HermitianOperator> hierarchy;
};

class StrategyValidationError : public std::runtime_error {
 public:
  StrategyValidationError(std::string what, std::size_t k, double residual)
      : std::runtime_error(std::move(what)), k_(k), residual_(residual) {}
  std::size_t k() const { return k_; }
  double residual() const { return residual_; }

 private:
  std::size_t k_;
  double residual_;
};

// Checks positivity and the marginal hierarchy
// Tr_{Y_k}(X_k) = X_{k-1} (x) I_{X_k}, recovering each X_{k-1} as
// Tr_{Y_k, X_k}(X_k) / x_k.  Residuals are relative to ||X_k||_F.
StrategyOperator validate_strategy(const HermitianOperator& op,
                                   const RoundStructure& rounds,
                                   double feasibility_tol = kFeasibilityTol);

// J of the identity-padded composition of the given channels.  phis[k] maps
// Z_k (x) X_{k+1} -> Y_{k+1} (x) Z_{k+1} with trivial initial and final
// memory; memory labels come from the channels themselves.
StrategyOperator strategy_from_channels(const std::vector<Channel>& phis,
                                        const RoundStructure& rounds);

// Random strategy via strategy_from_channels on Haar-random channels with the
// given intermediate memory dimensions (z_1..z_{n-1}).
StrategyOperator random_strategy(const RoundStructure& rounds,
                                 const std::vector<Index>& memory_dims,
                                 CounterRng& rng);

// <H, X_n>.
double strategy_value(const StrategyOperator& s, const HermitianOperator& h);

// Direct sequential evolution of the full interaction.  Bob supplies n+1
// channels (Psi_1 prepares, Psi_{n+1} maps onto his final memory) and a
// measurement effect 0 <= Q <= I on that memory.
double simulate_interaction(const std::vector<Channel>& alice,
                            const std::vector<Channel>& bob,
                            const HermitianOperator& effect,
                            const RoundStructure& rounds);

// The operator P on (Y_1..Y_n, X_1..X_n) with <P, X> equal to the interaction
// probability for every strategy X of Alice.  Built by contracting Bob's comb
// with the effect.
HermitianOperator co_strategy_functional(const std::vector<Channel>& bob,
                                         const HermitianOperator& effect,
                                         const RoundStructure& rounds);

}  // namespace combforge

#endif
