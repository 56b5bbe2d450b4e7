#include "spikeatk/uap.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <thread>

#include "spikeatk/binarize.hpp"
#include "spikeatk/metrics.hpp"

namespace spikeatk {

void UapConfig::validate() const {
  if (!(gradient_scale > 0.0)) {
    throw std::invalid_argument("gradient scale e must be > 0");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("temperature tau must be > 0");
  }
  if (!(sparsity_cap_pct > 0.0 && sparsity_cap_pct <= 100.0)) {
    throw std::invalid_argument("sparsity cap must be in (0, 100]");
  }
}

namespace {

RealTensor accumulate_block(const SnnModel& model, const Dataset& dataset,
                            std::size_t begin, std::size_t end,
                            const CountLossParams& loss_params,
                            std::atomic<std::size_t>& pairs) {
  RealTensor sum(dataset.front().input.geometry());
  const int classes = model.class_count();
  for (std::size_t j = begin; j < end; ++j) {
    const LabeledSample& sample = dataset[j];
    ForwardTrace trace = forward(model, sample.input, true);
    std::vector<double> count_grads(classes, 0.0);
    count_mse_loss(trace.class_counts, sample.label, loss_params,
                   trace.timesteps, count_grads);
    const auto grad_out = expand_count_grads(count_grads, trace.timesteps);
    const Gradients grads = backward(model, trace, grad_out);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += grads.input_grad[i];
    }
    pairs.fetch_add(1, std::memory_order_relaxed);
  }
  return sum;
}

}  // namespace

RealTensor accumulate_gradients(const SnnModel& model, const Dataset& dataset,
                                const CountLossParams& loss_params,
                                UapStats* stats, int jobs) {
  if (dataset.empty()) {
    throw std::invalid_argument("cannot accumulate gradients over an empty dataset");
  }
  loss_params.validate();
  const int classes = model.class_count();
  const Geometry geom = dataset.front().input.geometry();
  for (const LabeledSample& s : dataset) {
    if (s.label < 0 || s.label >= classes) {
      throw std::out_of_range("sample '" + s.id + "' label " +
                              std::to_string(s.label) + " out of range for " +
                              std::to_string(classes) + " classes");
    }
    require_same_geometry(s.input.geometry(), geom, "accumulate_gradients");
  }

  jobs = std::clamp<int>(jobs, 1, static_cast<int>(dataset.size()));
  std::atomic<std::size_t> pairs{0};
  RealTensor global(geom);
  if (jobs == 1) {
    global = accumulate_block(model, dataset, 0, dataset.size(), loss_params,
                              pairs);
  } else {
    std::vector<RealTensor> partial(jobs);
    std::vector<std::thread> workers;
    const std::size_t block =
        (dataset.size() + jobs - 1) / static_cast<std::size_t>(jobs);
    for (int t = 0; t < jobs; ++t) {
      const std::size_t begin = std::min(dataset.size(), t * block);
      const std::size_t end = std::min(dataset.size(), begin + block);
      workers.emplace_back([&, t, begin, end] {
        if (begin < end) {
          partial[t] = accumulate_block(model, dataset, begin, end,
                                        loss_params, pairs);
        }
      });
    }
    for (auto& w : workers) w.join();
    for (int t = 0; t < jobs; ++t) {
      if (partial[t].size() == 0) continue;
      for (std::size_t i = 0; i < global.size(); ++i) {
        global[i] += partial[t][i];
      }
    }
  }
  if (stats) stats->forward_backward_pairs = pairs.load();
  return global;
}

SpikeTensor build_uap(const RealTensor& global_grad, const UapConfig& cfg) {
  cfg.validate();
  global_grad.check_finite("build_uap");
  bool all_zero = true;
  for (std::size_t i = 0; i < global_grad.size() && all_zero; ++i) {
    all_zero = global_grad[i] == 0.0;
  }
  if (all_zero) {
    std::cerr << "warning: all-zero gradient tensor; the rounded patch "
                 "degenerates to all-ones\n";
  }

  RealTensor scaled(global_grad.geometry());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled[i] = global_grad[i] * cfg.gradient_scale;
  }
  RelaxationParams relax;
  relax.tau = cfg.tau;
  relax.beta = 1.0;
  relax.noise = cfg.noise;
  relax.seed = cfg.seed;
  const RealTensor pr = gumbel_softmax(scaled, relax);
  SpikeTensor uap = round_binary(pr);

  const double sparsity =
      perturbation_size(SpikeTensor(uap.geometry()), uap);
  if (sparsity > cfg.sparsity_cap_pct) {
    throw UapGenerationError(
        "generated patch spikes on " + std::to_string(sparsity) +
        "% of cells, above the stealth cap of " +
        std::to_string(cfg.sparsity_cap_pct) + "%");
  }
  return uap;
}

SpikeTensor apply_uap(const SpikeTensor& input, const SpikeTensor& uap) {
  require_same_geometry(input.geometry(), uap.geometry(), "apply_uap");
  SpikeTensor out = input;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (uap[i]) out.set_flat(i, true);
  }
  return out;
}

UapReport evaluate_uap(const SnnModel& model, const Dataset& dataset,
                       const SpikeTensor& uap) {
  UapReport report;
  report.uap = uap;
  report.dataset_size = dataset.size();
  report.sparsity_pct = perturbation_size(SpikeTensor(uap.geometry()), uap);
  report.per_class.resize(model.class_count());
  for (int c = 0; c < model.class_count(); ++c) report.per_class[c].cls = c;

  std::size_t counted = 0, fooled = 0;
  for (const LabeledSample& sample : dataset) {
    const ForwardTrace clean = forward(model, sample.input, false);
    if (winner(clean.class_counts) != sample.label) continue;  // skip misclassified
    ++counted;
    auto& cls = report.per_class[sample.label];
    ++cls.counted;
    const SpikeTensor patched = apply_uap(sample.input, uap);
    const ForwardTrace adv = forward(model, patched, false);
    if (winner(adv.class_counts) != sample.label) {
      ++fooled;
      ++cls.fooled;
    }
  }
  if (counted == 0) {
    throw std::runtime_error(
        "no correctly classified samples to evaluate the patch on");
  }
  for (auto& cls : report.per_class) {
    cls.asr_pct = cls.counted == 0
                      ? 0.0
                      : 100.0 * cls.fooled / static_cast<double>(cls.counted);
  }
  report.counted = counted;
  report.overall_asr_pct = 100.0 * fooled / static_cast<double>(counted);
  return report;
}

}  // namespace spikeatk
