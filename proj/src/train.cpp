#include "spikeatk/train.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "spikeatk/adam.hpp"
#include "spikeatk/rng.hpp"

namespace spikeatk {

void CountLossParams::validate() const {
  if (true_fraction < 0.0 || true_fraction > 1.0 || false_fraction < 0.0 ||
      false_fraction > 1.0) {
    throw std::invalid_argument("count-loss fractions must lie in [0, 1]");
  }
  if (!(true_fraction > false_fraction)) {
    throw std::invalid_argument(
        "true-class fraction must exceed the false-class fraction");
  }
}

double count_mse_loss(std::span<const double> counts, int label,
                      const CountLossParams& params, int timesteps,
                      std::span<double> grad) {
  if (label < 0 || label >= static_cast<int>(counts.size())) {
    throw std::out_of_range("label " + std::to_string(label) +
                            " out of range for " +
                            std::to_string(counts.size()) + " classes");
  }
  if (!grad.empty() && grad.size() != counts.size()) {
    throw std::invalid_argument("count_mse_loss gradient size mismatch");
  }
  const double n = static_cast<double>(counts.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double target =
        (static_cast<int>(i) == label ? params.true_fraction
                                      : params.false_fraction) *
        timesteps;
    const double diff = counts[i] - target;
    loss += diff * diff / n;
    if (!grad.empty()) grad[i] = 2.0 * diff / n;
  }
  return loss;
}

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  targets.validate();
}

double evaluate_accuracy(const SnnModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const LabeledSample& sample : data) {
    const ForwardTrace t = forward(model, sample.input, false);
    if (winner(t.class_counts) == sample.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainResult train_model(SnnModel& model, const Dataset& train,
                        const Dataset& test, const TrainConfig& cfg) {
  cfg.validate();
  if (train.empty()) {
    throw std::invalid_argument("training dataset is empty");
  }
  const int classes = model.class_count();
  for (const LabeledSample& s : train) {
    if (s.label < 0 || s.label >= classes) {
      throw std::out_of_range("sample '" + s.id + "' label " +
                              std::to_string(s.label) +
                              " out of range for " + std::to_string(classes) +
                              " classes");
    }
  }

  TrainResult result;
  AdamOptimizer opt(model.param_count());
  auto rng = make_rng(cfg.seed, 0x7261696e);

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + cfg.batch_size);
      std::vector<double> batch_grads(model.param_count(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t j = start; j < end; ++j) {
        const LabeledSample& sample = train[order[j]];
        ForwardTrace trace = forward(model, sample.input, true);
        std::vector<double> count_grads(classes, 0.0);
        batch_loss += count_mse_loss(trace.class_counts, sample.label,
                                     cfg.targets, trace.timesteps,
                                     count_grads);
        const auto grad_out =
            expand_count_grads(count_grads, trace.timesteps);
        const Gradients grads = backward(model, trace, grad_out);
        const auto flat = flatten_gradients(model, grads);
        for (std::size_t p = 0; p < flat.size(); ++p) {
          batch_grads[p] += flat[p];
        }
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : batch_grads) g *= scale;
      auto params = model.flatten_params();
      opt.step(params, batch_grads, cfg.learning_rate);
      model.set_params(params);
      batch_loss *= scale;
      epoch_loss += batch_loss * static_cast<double>(end - start);
      if (epoch == 0) {
        result.first_epoch_batch_losses.push_back(batch_loss);
      }
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = epoch_loss / static_cast<double>(train.size());
    stats.train_accuracy = evaluate_accuracy(model, train);
    stats.test_accuracy = evaluate_accuracy(model, test);
    result.history.push_back(stats);
  }
  return result;
}

}  // namespace spikeatk
