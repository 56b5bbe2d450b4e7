#ifndef SPIKEATK_METRICS_HPP
#define SPIKEATK_METRICS_HPP

#include <span>

#include "spikeatk/tensor.hpp"

namespace spikeatk {

// Cell-wise absolute difference of two binary tensors: 1 exactly where the
// inputs disagree.
SpikeTensor diff_tensor(const SpikeTensor& a, const SpikeTensor& b);

// Percentage of cells that differ between a and b, normalized by the total
// cell count (channels * width * height * timesteps). Symmetric, in [0, 100].
double perturbation_size(const SpikeTensor& a, const SpikeTensor& b);

// Unbiased sample variance of all cells treated as one flat collection.
// For binary data with flip fraction p over N cells this equals
// p*(1-p)*N/(N-1). Requires at least 2 cells.
double sample_variance(const SpikeTensor& y);

// Same estimator over real-valued data; used for the relaxed similarity
// loss gradient.
double sample_variance(std::span<const double> values);

}  // namespace spikeatk

#endif  // SPIKEATK_METRICS_HPP
