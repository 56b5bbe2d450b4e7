#ifndef SPIKEATK_ATTACK_HPP
#define SPIKEATK_ATTACK_HPP

#include <cstdint>
#include <vector>

#include "spikeatk/metrics.hpp"
#include "spikeatk/network.hpp"
#include "spikeatk/tensor.hpp"

namespace spikeatk {

struct TauSchedule {
  double initial = 1.0;
  double decay = 0.97;  // multiplied in every iteration
  double floor = 0.5;
};

// The similarity-loss relaxation r1 grows by `increment` whenever the total
// loss has not improved by at least 1e-6 for `patience` iterations.
struct R1Schedule {
  double initial = 0.0;
  double increment = 0.0005;
  int patience = 30;
};

// Defaults are tuned on the synthetic desk dataset; see README for the
// noise and schedule notes.
struct AttackConfig {
  double alpha1 = 700.0;   // similarity loss weight
  double alpha2 = 1.0;     // winning-class loss weight
  double alpha3 = 1.0;     // confidence-margin loss weight
  double learning_rate = 0.005;
  TauSchedule tau;
  double beta = 1.0;
  R1Schedule r1;
  double margin = 1.0;       // d, required spike-count gap after the flip
  int max_iterations = 500;  // N_IT
  bool noise = false;        // Gumbel noise during the attack
  bool resample_noise = true;  // fresh draw each iteration when noise is on
  bool early_stop = false;    // stop at the first success
  std::uint64_t seed = 1;

  void validate() const;
};

struct LossBreakdown {
  double similarity = 0.0;    // L1
  double winning_class = 0.0; // L2
  double margin = 0.0;        // L3
  double total = 0.0;
};

struct AttackReport {
  bool success = false;
  SpikeTensor adversarial;   // best success, or the last iterate on failure
  int original_class = -1;   // w
  int adversarial_class = -1;  // w_adv of the returned tensor
  double perturbation_pct = 0.0;
  int iterations = 0;        // loop iterations executed
  double elapsed_ms = 0.0;
  LossBreakdown final_loss;  // at the returned iterate
  double best_success_loss = 0.0;  // minimum total loss over successes
  std::vector<double> loss_history;       // total loss per iteration
  std::vector<std::uint8_t> success_history;  // misclassified at iteration?
};

// L1: hinge on the sample variance of the original/adversarial diff.
double loss_similarity(const SpikeTensor& y, double r1);
// L2: spike count of the originally winning neuron on the adversarial pass.
double loss_winning_class(const ForwardTrace& trace, int w);
// L3: hinge on the spike-count margin between the old and new winner.
double loss_margin(const ForwardTrace& trace, int w, double d);
double total_loss(double l1, double l2, double l3, double alpha1,
                  double alpha2, double alpha3);

// Input-specific adversarial attack: optimizes a real-valued tensor whose
// binarization flips a minimal set of input spikes so the winner changes.
// The caller is expected to pass an input the model classifies correctly.
AttackReport run_attack(const SnnModel& model, const SpikeTensor& input,
                        const AttackConfig& cfg);

}  // namespace spikeatk

#endif  // SPIKEATK_ATTACK_HPP
