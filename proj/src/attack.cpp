#include "spikeatk/attack.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spikeatk/adam.hpp"
#include "spikeatk/binarize.hpp"
#include "spikeatk/rng.hpp"

namespace spikeatk {

namespace {

constexpr double kStagnationTolerance = 1e-6;
constexpr std::uint64_t kInitStream = 0x696e6974;

}  // namespace

void AttackConfig::validate() const {
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be >= 1, got " +
                                std::to_string(max_iterations));
  }
  if (margin < 0.0) throw std::invalid_argument("margin d must be >= 0");
  if (alpha1 < 0.0 || alpha2 < 0.0 || alpha3 < 0.0) {
    throw std::invalid_argument("loss weights must be >= 0");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be > 0");
  }
  if (!(tau.initial > 0.0) || !(tau.floor > 0.0) || !(tau.decay > 0.0) ||
      tau.decay > 1.0) {
    throw std::invalid_argument("tau schedule must be positive with decay in (0, 1]");
  }
  if (r1.increment < 0.0 || r1.patience < 1) {
    throw std::invalid_argument("r1 schedule needs increment >= 0 and patience >= 1");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("beta must be in (0, 1]");
  }
}

double loss_similarity(const SpikeTensor& y, double r1) {
  return std::max(0.0, sample_variance(y) - r1);
}

double loss_winning_class(const ForwardTrace& trace, int w) {
  if (w < 0 || w >= static_cast<int>(trace.class_counts.size())) {
    throw std::out_of_range("class index " + std::to_string(w) +
                            " out of range for " +
                            std::to_string(trace.class_counts.size()) +
                            " classes");
  }
  return trace.class_counts[w];
}

double loss_margin(const ForwardTrace& trace, int w, double d) {
  const double count_w = loss_winning_class(trace, w);
  const int w_adv = winner(trace.class_counts);
  return std::max(0.0, count_w - trace.class_counts[w_adv] + d);
}

double total_loss(double l1, double l2, double l3, double alpha1,
                  double alpha2, double alpha3) {
  return alpha1 * l1 + alpha2 * l2 + alpha3 * l3;
}

AttackReport run_attack(const SnnModel& model, const SpikeTensor& input,
                        const AttackConfig& cfg) {
  cfg.validate();
  const auto start_time = std::chrono::steady_clock::now();

  const Geometry geom = input.geometry();
  const std::size_t n_cells = geom.cell_count();
  const int classes = model.class_count();
  const int steps = geom.timesteps;

  const ForwardTrace clean = forward(model, input, false);
  const int w = winner(clean.class_counts);

  // Start near the unperturbed input: strongly negative logits give small
  // initial flip probabilities.
  RealTensor i_real(geom);
  {
    auto rng = make_rng(cfg.seed, kInitStream);
    std::uniform_real_distribution<double> init(-3.0, -1.0);
    for (std::size_t i = 0; i < n_cells; ++i) i_real[i] = init(rng);
  }
  AdamOptimizer opt(n_cells);

  AttackReport report;
  report.original_class = w;
  report.loss_history.reserve(cfg.max_iterations);
  report.success_history.reserve(cfg.max_iterations);

  bool have_best = false;
  double best_ps = std::numeric_limits<double>::infinity();
  double best_total = std::numeric_limits<double>::infinity();
  double best_success_loss = std::numeric_limits<double>::infinity();
  SpikeTensor best_adv;
  int best_w_adv = w;
  LossBreakdown best_breakdown;

  SpikeTensor last_adv;
  int last_w_adv = w;
  LossBreakdown last_breakdown;

  double tau = cfg.tau.initial;
  double r1 = cfg.r1.initial;
  double loss_floor = std::numeric_limits<double>::infinity();
  int last_improvement = 0;

  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    RelaxationParams relax;
    relax.tau = tau;
    relax.beta = cfg.beta;
    relax.noise = cfg.noise;
    relax.seed = mix_seed(cfg.seed, cfg.resample_noise ? it : 0);

    const RealTensor pr = gumbel_softmax(i_real, relax);
    const RealTensor adv_real = apply_perturbation(input, pr, cfg.beta);
    const SpikeTensor adv = ste_binarize(adv_real);
    const ForwardTrace trace = forward(model, adv, true);
    const int w_adv = winner(trace.class_counts);

    const SpikeTensor y = diff_tensor(input, adv);
    LossBreakdown loss;
    loss.similarity = loss_similarity(y, r1);
    loss.winning_class = loss_winning_class(trace, w);
    loss.margin = loss_margin(trace, w, cfg.margin);
    loss.total = total_loss(loss.similarity, loss.winning_class, loss.margin,
                            cfg.alpha1, cfg.alpha2, cfg.alpha3);
    report.loss_history.push_back(loss.total);

    const bool success_now = w_adv != w;
    report.success_history.push_back(success_now ? 1 : 0);

    last_adv = adv;
    last_w_adv = w_adv;
    last_breakdown = loss;

    if (success_now) {
      best_success_loss = std::min(best_success_loss, loss.total);
      const double ps = perturbation_size(input, adv);
      if (!have_best || ps < best_ps ||
          (ps == best_ps && loss.total < best_total)) {
        have_best = true;
        best_ps = ps;
        best_total = loss.total;
        best_adv = adv;
        best_w_adv = w_adv;
        best_breakdown = loss;
      }
      if (cfg.early_stop) {
        ++it;
        break;
      }
    }

    // r1 relaxation: widen the similarity hinge when the loss stagnates.
    if (loss.total < loss_floor - kStagnationTolerance) {
      loss_floor = loss.total;
      last_improvement = it;
    } else if (it - last_improvement >= cfg.r1.patience) {
      r1 += cfg.r1.increment;
      last_improvement = it;
    }

    // Gradient of alpha2*L2 + alpha3*L3 w.r.t. the per-class spike counts.
    std::vector<double> count_grads(classes, 0.0);
    count_grads[w] += cfg.alpha2;
    if (w_adv != w && loss.margin > 0.0) {
      count_grads[w] += cfg.alpha3;
      count_grads[w_adv] -= cfg.alpha3;
    }
    const auto grad_out = expand_count_grads(count_grads, steps);
    Gradients grads = backward(model, trace, grad_out);

    // Gradient of alpha1*L1 through the real-valued relaxation
    // |I - I_adv,real| = beta*Pr (the binary variance is flat a.e.).
    RealTensor upstream = std::move(grads.input_grad);
    {
      double mean = 0.0;
      for (std::size_t i = 0; i < n_cells; ++i) mean += cfg.beta * pr[i];
      mean /= static_cast<double>(n_cells);
      double var = 0.0;
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double d = cfg.beta * pr[i] - mean;
        var += d * d;
      }
      var /= static_cast<double>(n_cells - 1);
      if (var - r1 > 0.0) {
        const double scale = cfg.alpha1 * 2.0 /
                             static_cast<double>(n_cells - 1);
        for (std::size_t i = 0; i < n_cells; ++i) {
          const double dy = scale * (cfg.beta * pr[i] - mean);
          upstream[i] += input[i] ? -dy : dy;
        }
      }
    }

    const RealTensor grad_real =
        relaxation_chain_grad(upstream, pr, tau, cfg.beta, input);
    opt.step(i_real.values(), grad_real.values(), cfg.learning_rate);

    tau = std::max(cfg.tau.floor, tau * cfg.tau.decay);
  }

  report.iterations = it;
  report.success = have_best;
  if (have_best) {
    report.adversarial = std::move(best_adv);
    report.adversarial_class = best_w_adv;
    report.final_loss = best_breakdown;
    report.best_success_loss = best_success_loss;
    // Independent re-verification of the success condition.
    const ForwardTrace check = forward(model, report.adversarial, false);
    if (winner(check.class_counts) == w) {
      throw std::logic_error(
          "attack bookkeeping error: stored adversarial sample does not "
          "change the winner");
    }
  } else {
    report.adversarial = std::move(last_adv);
    report.adversarial_class = last_w_adv;
    report.final_loss = last_breakdown;
    report.best_success_loss = std::numeric_limits<double>::quiet_NaN();
  }
  report.perturbation_pct = perturbation_size(input, report.adversarial);

  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start_time)
          .count();
  return report;
}

}  // namespace spikeatk
