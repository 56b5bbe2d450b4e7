#ifndef SPIKEATK_TRAIN_HPP
#define SPIKEATK_TRAIN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikeatk/network.hpp"
#include "spikeatk/tensor.hpp"

namespace spikeatk {

struct LabeledSample {
  std::string id;
  SpikeTensor input;
  int label = 0;
};

using Dataset = std::vector<LabeledSample>;

// Spike-count targets of the training loss: the true class should fire on
// true_fraction of the timesteps, every other class on false_fraction.
// Close targets keep the decision margins small; wide ones (e.g. 0.8/0.1)
// train the same accuracy but make every sample maximally confident.
struct CountLossParams {
  double true_fraction = 0.32;
  double false_fraction = 0.28;

  void validate() const;
};

// Mean squared error between per-class spike counts and their targets.
// Fills per-class dL/dcount when grad is non-empty.
double count_mse_loss(std::span<const double> counts, int label,
                      const CountLossParams& params, int timesteps,
                      std::span<double> grad);

struct TrainConfig {
  int epochs = 30;
  double learning_rate = 0.003;
  int batch_size = 8;
  CountLossParams targets;
  std::uint64_t seed = 42;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochStats> history;
  // mean training loss of each optimizer step in the first epoch
  std::vector<double> first_epoch_batch_losses;
};

double evaluate_accuracy(const SnnModel& model, const Dataset& data);

// Adam on spike-count MSE over shuffled mini-batches; mutates the model.
TrainResult train_model(SnnModel& model, const Dataset& train,
                        const Dataset& test, const TrainConfig& cfg);

}  // namespace spikeatk

#endif  // SPIKEATK_TRAIN_HPP
