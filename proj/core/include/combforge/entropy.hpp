#ifndef COMBFORGE_ENTROPY_HPP
#define COMBFORGE_ENTROPY_HPP

#include "combforge/strategy_sdp.hpp"

namespace combforge {

// Max-relative entropy log2 min{lambda >= 0 : P <= lambda Q} in bits;
// +infinity when supp(P) is not contained in supp(Q).
double d_max(const HermitianOperator& p, const HermitianOperator& q);

// Min-relative entropy -log2 F(P, Q)^2 in bits; +infinity at zero fidelity.
double d_min(const HermitianOperator& p, const HermitianOperator& q);

struct HminResult {
  double bits = 0.0;
  double sdp_optimum = 0.0;        // 2^{-H_min}
  HermitianOperator dual_y;        // I (x) Y >= rho certificate
  SdpSolution solution;
};

// Conditional min-entropy H_min(X | rest) of a state on the given layout;
// `x_labels` name the X part.  Solved as max <rho, K> over Tr_X(K) = I, with
// the dual certificate reassembled from the equality multipliers.
HminResult h_min(const HermitianOperator& rho,
                 const std::vector<std::string>& x_labels,
                 const SolveOptions& opts = {});

struct HmaxResult {
  double bits = 0.0;
  double sdp_optimum = 0.0;        // 2^{H_max}
  HermitianOperator sigma;         // optimal conditioning state
  double fidelity_crosscheck = 0.0;  // F(rho, I (x) sigma)^2 at the optimum
  SdpSolution solution;
};

// Conditional max-entropy H_max(X | rest) via the primal SDP over the
// state's purification; sigma is extracted from the optimizer.
HmaxResult h_max(const HermitianOperator& rho,
                 const std::vector<std::string>& x_labels,
                 const SolveOptions& opts = {});

struct EntropyReport {
  double h_min_bits = 0.0;
  double h_max_bits = 0.0;
  double identity_residual = 0.0;  // |h_min + h_max|
  HminResult min_side;
  HmaxResult max_side;
};

// H_min(X|Y) on Tr_Z(uu*) and H_max(X|Z) on Tr_Y(uu*) for a pure tripartite
// vector; the two should sum to zero.
EntropyReport verify_min_max_identity(const ComplexMatrix& u,
                                      const std::vector<std::string>& x_labels,
                                      const std::vector<std::string>& y_labels,
                                      const std::vector<std::string>& z_labels,
                                      const SolveOptions& opts = {});

// max_Phi F(a, J(Phi) (x) I_bystanders) over channels Phi: in -> out, both
// label sets inside a's layout.  Uses the block-matrix fidelity program.
struct ChannelFidelityResult {
  double fidelity = 0.0;
  SdpSolution solution;
};
ChannelFidelityResult max_channel_fidelity(
    const HermitianOperator& a, const std::vector<std::string>& in_labels,
    const std::vector<std::string>& out_labels, const SolveOptions& opts = {});

struct FourMessageResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double strategy_opt_forward = 0.0;
  double strategy_opt_reversed = 0.0;
  std::vector<SdpSolution> solutions;  // lhs, rhs, forward, reversed
};

// The four-message identity: u's factors are read positionally as
// (X, Y, Z, W); lhs/rhs are the two channel-fidelity maxima and the strategy
// optima correspond to rounds (Y -> X), (Z -> W) and their reversal.
FourMessageResult four_message_values(const ComplexMatrix& u,
                                      const SolveOptions& opts = {});

struct QuantumCorrelationResult {
  double value = 0.0;
  double squared_fidelity = 0.0;  // value / dim(Y...), clipped into [0, 1]
  StrategyOptimum optimum;
};

QuantumCorrelationResult quantum_correlation(const HermitianOperator& rho,
                                             const RoundStructure& rounds,
                                             const SolveOptions& opts = {});

// Builds X once through the forward channel composition and once through the
// reversed-order transposed (unital) maps; true when the two agree to 1e-8
// relative Frobenius and X validates.
bool verify_statement_equivalence(const std::vector<Channel>& phis,
                                  const RoundStructure& rounds);
double statement_equivalence_residual(const std::vector<Channel>& phis,
                                      const RoundStructure& rounds);

}  // namespace combforge

#endif
