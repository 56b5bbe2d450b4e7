#ifndef SPIKEATK_CHECKPOINT_HPP
#define SPIKEATK_CHECKPOINT_HPP

#include <filesystem>

#include "spikeatk/network.hpp"
#include "spikeatk/train.hpp"

namespace spikeatk {

// Model checkpoint: one magic line, one JSON header line (layer specs, seed,
// neuron parameters, count-loss targets), then a little-endian 64-bit float
// blob with each layer's weights followed by its bias.
struct Checkpoint {
  SnnModel model;
  CountLossParams loss_params;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace spikeatk

#endif  // SPIKEATK_CHECKPOINT_HPP
