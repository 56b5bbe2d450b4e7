#include "spikeatk/synthetic.hpp"

#include <stdexcept>

#include "spikeatk/rng.hpp"

namespace spikeatk {

namespace {

constexpr std::uint64_t kMotifStream = 0x6d6f746966;  // "motif"
constexpr std::uint64_t kNoiseStream = 0x6e6f697365;  // "noise"

std::string sample_id(int cls, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "c%d_s%03d", cls, index);
  return buf;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (classes < 2) throw std::invalid_argument("need at least 2 classes");
  if (!geometry.valid()) {
    throw std::invalid_argument("invalid geometry " + geometry.describe());
  }
  if (motif_density <= 0.0 || motif_density >= 1.0) {
    throw std::invalid_argument("motif density must be in (0, 1)");
  }
  if (flip_probability < 0.0 || flip_probability >= 0.5) {
    throw std::invalid_argument("flip probability must be in [0, 0.5)");
  }
  if (samples_per_class < 1) {
    throw std::invalid_argument("samples_per_class must be >= 1");
  }
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw std::invalid_argument("train fraction must be in (0, 1)");
  }
}

SpikeTensor class_motif(const SyntheticSpec& spec, int cls) {
  spec.validate();
  if (cls < 0 || cls >= spec.classes) {
    throw std::out_of_range("class " + std::to_string(cls) + " out of range");
  }
  auto rng = make_rng(mix_seed(spec.seed, kMotifStream), cls);
  std::bernoulli_distribution bit(spec.motif_density);
  SpikeTensor motif(spec.geometry);
  for (std::size_t i = 0; i < motif.size(); ++i) motif.set_flat(i, bit(rng));
  return motif;
}

SplitDataset gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SplitDataset out;
  const int train_count = static_cast<int>(spec.samples_per_class *
                                           spec.train_fraction);
  for (int cls = 0; cls < spec.classes; ++cls) {
    const SpikeTensor motif = class_motif(spec, cls);
    for (int s = 0; s < spec.samples_per_class; ++s) {
      auto rng = make_rng(mix_seed(spec.seed, kNoiseStream),
                          mix_seed(cls, s));
      std::bernoulli_distribution flip(spec.flip_probability);
      SpikeTensor sample = motif;
      if (spec.flip_probability > 0.0) {
        for (std::size_t i = 0; i < sample.size(); ++i) {
          if (flip(rng)) sample.set_flat(i, !sample[i]);
        }
      }
      LabeledSample labeled{sample_id(cls, s), std::move(sample), cls};
      if (s < train_count) {
        out.train.push_back(std::move(labeled));
      } else {
        out.test.push_back(std::move(labeled));
      }
    }
  }
  return out;
}

}  // namespace spikeatk
