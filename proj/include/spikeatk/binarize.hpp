#ifndef SPIKEATK_BINARIZE_HPP
#define SPIKEATK_BINARIZE_HPP

#include <cstdint>

#include "spikeatk/tensor.hpp"

namespace spikeatk {

// Knobs of the real-to-binary relaxation.
struct RelaxationParams {
  double tau = 1.0;    // temperature, > 0
  double beta = 1.0;   // perturbation scale, in (0, 1]
  bool noise = true;   // draw Gumbel noise (off gives the plain logistic)
  std::uint64_t seed = 0;

  void validate() const;
};

// Element-wise binary-case Gumbel-Softmax:
//   Pr = logistic((x + g1 - g0) / tau)
// with g0, g1 i.i.d. Gumbel(0,1) draws when noise is enabled. Outputs are
// strictly inside (0, 1).
RealTensor gumbel_softmax(const RealTensor& x, const RelaxationParams& p);

// Eq-style perturbation application: cells where the input is silent move up
// by Pr*beta, cells with a spike move down by Pr*beta. Output lies in [0, 1].
RealTensor apply_perturbation(const SpikeTensor& input, const RealTensor& pr,
                              double beta);

// Straight-through estimator forward: hard threshold at 0.5 (exactly 0.5
// maps to 0). The backward rule is the identity: gradients w.r.t. the output
// are used unchanged as gradients w.r.t. the input.
SpikeTensor ste_binarize(const RealTensor& x);

// Nearest-integer rounding with half rounding up. No gradient contract.
SpikeTensor round_binary(const RealTensor& x);

// Chain rule from a gradient w.r.t. the perturbed real tensor back to the
// optimization variable: through the STE (identity), the perturbation
// application (+-beta by input branch) and the logistic (Pr*(1-Pr)/tau).
// pr must be the tensor cached from the same iteration's forward pass.
RealTensor relaxation_chain_grad(const RealTensor& upstream,
                                 const RealTensor& pr, double tau, double beta,
                                 const SpikeTensor& input);

}  // namespace spikeatk

#endif  // SPIKEATK_BINARIZE_HPP
