#ifndef COMBFORGE_CHANNEL_HPP
#define COMBFORGE_CHANNEL_HPP

#include <vector>

#include "combforge/conventions.hpp"
#include "combforge/rng.hpp"
#include "combforge/spectral.hpp"
#include "combforge/tensor_ops.hpp"

namespace combforge {

enum class ChannelKind { channel, unital_cp, general_cp };

// Kraus operators, each mapping input_layout to output_layout.
struct KrausSet {
  Layout input_layout;
  Layout output_layout;
  std::vector<Matrix> operators;
};

// A completely positive map stored as a Choi matrix with output factors
// first.  Input and output labels must be disjoint (distinct registers get
// distinct names).
class Channel {
 public:
  Channel(HermitianOperator choi, Layout input_layout, Layout output_layout,
          ChannelKind kind);

  const HermitianOperator& choi() const { return choi_; }
  const Layout& input_layout() const { return input_; }
  const Layout& output_layout() const { return output_; }
  ChannelKind kind() const { return kind_; }

 private:
  HermitianOperator choi_;
  Layout input_;
  Layout output_;
  ChannelKind kind_;
};

// J(Phi) = sum_i vec(K_i) vec(K_i)*; kind is detected from the Kraus set
// (trace-preserving wins over unital when both hold).
Channel choi_from_kraus(const KrausSet& k);

// Eigendecomposition of the Choi matrix; eigenvalues <= rank_tol * lambda_max
// are dropped.
KrausSet kraus_from_choi(const Channel& c,
                         double rank_tol = kKrausRankTolFactor);

// Phi(rho) for rho exactly on the input layout.
HermitianOperator apply_channel(const Channel& c, const HermitianOperator& rho);

// Applies the channel to the matching factors of a larger state; bystanders
// pass through.  Result layout: output factors first, then bystanders.
HermitianOperator apply_to(const Channel& c, const HermitianOperator& state);

// Sequential composition outer . inner; inner's outputs must be exactly
// outer's inputs (any order).  Use tensor_with_identity to pad bystanders.
Channel compose(const Channel& outer, const Channel& inner);

// c (x) identity on `extra` (same labels on the input and output side would
// collide, so the identity part uses extra_in -> extra_out label pairs).
Channel tensor_with_identity(const Channel& c, const Layout& extra_in,
                             const std::vector<std::string>& extra_out_labels);

// Isometry V: input -> output (x) env with Tr_env(V rho V*) = Phi(rho);
// env dimension is the Kraus rank.
ComplexMatrix stinespring_from_choi(const Channel& c,
                                    const std::string& env_label = "#env");

// Kraus operators transposed entrywise; flips channel <-> unital_cp.
Channel transpose_channel(const Channel& c);

Channel identity_channel(const Layout& input_layout,
                         const std::vector<std::string>& output_labels);
Channel unitary_channel(const ComplexMatrix& u);

Channel relabel_channel(const Channel& c, const Layout& new_input,
                        const Layout& new_output);

// Haar-random channel: QR of a Gaussian matrix gives the Stinespring
// isometry, then the environment is traced out.
Channel random_channel(const Layout& input_layout, const Layout& output_layout,
                       Index env_dim, CounterRng& rng);

// Complex-Gaussian vector, normalized.
ComplexMatrix random_pure_state(const Layout& layout, CounterRng& rng);

// G G* / Tr(G G*) with G Gaussian of the given rank.
HermitianOperator random_density(const Layout& layout, Index rank,
                                 CounterRng& rng);

Matrix random_unitary(Index dim, CounterRng& rng);

}  // namespace combforge

#endif
