#ifndef SPIKEATK_UAP_HPP
#define SPIKEATK_UAP_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikeatk/network.hpp"
#include "spikeatk/train.hpp"

namespace spikeatk {

struct UapConfig {
  double gradient_scale = 1.0;  // e
  double tau = 1.0;
  bool noise = false;  // reproducible by default
  std::uint64_t seed = 0;
  // A patch denser than this is useless for a stealthy attack and fails
  // generation.
  double sparsity_cap_pct = 5.0;

  void validate() const;
};

// Raised when the accumulated gradients cannot produce a usable patch
// (degenerate all-ones rounding or sparsity above the cap).
class UapGenerationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UapStats {
  std::size_t forward_backward_pairs = 0;
};

struct UapClassStats {
  int cls = 0;
  int counted = 0;  // correctly classified samples of this class
  int fooled = 0;
  double asr_pct = 0.0;
};

struct UapReport {
  SpikeTensor uap;
  double sparsity_pct = 0.0;
  std::vector<UapClassStats> per_class;
  double overall_asr_pct = 0.0;
  std::size_t counted = 0;       // samples entering the ASR
  std::size_t dataset_size = 0;  // N_D of the evaluated dataset
};

// One forward/backward pass per sample, input-space gradients of the
// correct-classification spike-count loss summed into a zero-initialized
// tensor of input shape. `jobs` shards the dataset into contiguous blocks
// with private partial sums merged in block order; jobs=1 is the
// deterministic reference.
RealTensor accumulate_gradients(const SnnModel& model, const Dataset& dataset,
                                const CountLossParams& loss_params,
                                UapStats* stats = nullptr, int jobs = 1);

// Pr = gumbel_softmax(global_grad * e, tau); UAP = round(Pr).
// Warns on an all-zero gradient tensor and throws UapGenerationError when
// the rounded patch is denser than the sparsity cap.
SpikeTensor build_uap(const RealTensor& global_grad, const UapConfig& cfg);

// Spike insertion: cell-wise OR merge.
SpikeTensor apply_uap(const SpikeTensor& input, const SpikeTensor& uap);

// ASR over the samples the clean model classifies correctly; per-class
// breakdown and patch sparsity included.
UapReport evaluate_uap(const SnnModel& model, const Dataset& dataset,
                       const SpikeTensor& uap);

}  // namespace spikeatk

#endif  // SPIKEATK_UAP_HPP
