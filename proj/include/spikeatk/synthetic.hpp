#ifndef SPIKEATK_SYNTHETIC_HPP
#define SPIKEATK_SYNTHETIC_HPP

#include <cstdint>

#include "spikeatk/train.hpp"

namespace spikeatk {

// Desk-scale stand-in for the neuromorphic benchmark datasets: each class is
// a fixed pseudo-random spatiotemporal spike motif, and each sample is its
// class motif with independent per-cell Bernoulli flips.
struct SyntheticSpec {
  int classes = 4;
  Geometry geometry{2, 8, 8, 50};
  double motif_density = 0.08;   // fraction of 1-cells in each motif
  double flip_probability = 0.015;
  int samples_per_class = 200;
  double train_fraction = 0.8;   // stratified split
  std::uint64_t seed = 42;

  void validate() const;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
};

// The deterministic motif of one class (depends only on spec.seed and cls).
SpikeTensor class_motif(const SyntheticSpec& spec, int cls);

SplitDataset gen_synthetic(const SyntheticSpec& spec);

}  // namespace spikeatk

#endif  // SPIKEATK_SYNTHETIC_HPP
