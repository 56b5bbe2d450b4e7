#include "doctest.h"
#include "spikeatk/network.hpp"
#include "spikeatk/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace spikeatk;

namespace {

SpikeTensor random_input(const Geometry& g, std::mt19937_64& rng,
                         double density = 0.4) {
  SpikeTensor t(g);
  std::bernoulli_distribution bit(density);
  for (std::size_t i = 0; i < t.size(); ++i) t.set_flat(i, bit(rng));
  return t;
}

RealTensor random_real_input(const Geometry& g, std::mt19937_64& rng) {
  RealTensor t(g);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = val(rng);
  return t;
}

// Loss used by the finite-difference oracle: a fixed random linear
// functional of the final-layer spike counts, evaluated on the relaxed
// (everywhere-differentiable) forward mode.
double relaxed_loss(const SnnModel& model, const RealTensor& input,
                    const std::vector<double>& coeffs) {
  ForwardTrace t = forward(model, input, false, ForwardMode::relaxed);
  double loss = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    loss += coeffs[i] * t.class_counts[i];
  }
  return loss;
}

double rel_err(double fd, double an) {
  const double denom = std::max({std::abs(fd), std::abs(an), 1e-4});
  return std::abs(fd - an) / denom;
}

// Central finite differences over every weight, bias and input cell.
void check_gradients(SnnModel model, const RealTensor& input,
                     std::mt19937_64& rng, double tol) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<double> coeffs(model.class_count());
  for (double& c : coeffs) c = coeff(rng);

  ForwardTrace trace = forward(model, input, true, ForwardMode::relaxed);
  const auto grad_out = expand_count_grads(coeffs, trace.timesteps);
  const Gradients grads = backward(model, trace, grad_out);
  const std::vector<double> analytic = flatten_gradients(model, grads);

  const double eps = 1e-5;
  std::vector<double> params = model.flatten_params();
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double saved = params[p];
    params[p] = saved + eps;
    model.set_params(params);
    const double up = relaxed_loss(model, input, coeffs);
    params[p] = saved - eps;
    model.set_params(params);
    const double down = relaxed_loss(model, input, coeffs);
    params[p] = saved;
    const double fd = (up - down) / (2.0 * eps);
    REQUIRE(rel_err(fd, analytic[p]) < tol);
  }
  model.set_params(params);

  RealTensor x = input;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = relaxed_loss(model, x, coeffs);
    x[i] = saved - eps;
    const double down = relaxed_loss(model, x, coeffs);
    x[i] = saved;
    const double fd = (up - down) / (2.0 * eps);
    REQUIRE(rel_err(fd, grads.input_grad[i]) < tol);
  }
}

}  // namespace

TEST_CASE("winner picks the highest count with lowest-index ties") {
  CHECK(winner(std::vector<double>{3, 5, 2}) == 1);
  CHECK(winner(std::vector<double>{4, 4, 1}) == 0);
  CHECK(winner(std::vector<double>{7}) == 0);
  CHECK_THROWS_AS(winner(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("winner is invariant to positive scaling") {
  std::mt19937_64 rng(mix_seed(31, 0));
  std::uniform_real_distribution<double> count(0.0, 20.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> counts(6);
    for (double& c : counts) c = count(rng);
    const double s = scale(rng);
    std::vector<double> scaled = counts;
    for (double& c : scaled) c *= s;
    CHECK(winner(counts) == winner(scaled));
  }
}

TEST_CASE("all-zero input with zero bias produces zero spikes") {
  SnnModel model = SnnModel::build(
      Shape3{2, 3, 3},
      {LayerSpec{.kind = LayerKind::dense, .units = 5},
       LayerSpec{.kind = LayerKind::dense, .units = 3}},
      7);
  SpikeTensor input(Geometry{2, 3, 3, 6});
  ForwardTrace t = forward(model, input, true);
  for (double c : t.class_counts) CHECK(c == 0.0);
  for (const auto& layer_spikes : t.spikes) {
    for (double s : layer_spikes) CHECK(s == 0.0);
  }
}

TEST_CASE("single neuron follows the LIF recurrence by hand") {
  // theta=1, decay=0.9, drive 0.6 at k=0 and k=1:
  // U = 0.6 (no spike), then 0.9*0.6 + 0.6 = 1.14 (spike), then reset.
  SnnModel model = SnnModel::build(
      Shape3{1, 1, 1},
      {LayerSpec{.kind = LayerKind::dense, .units = 1, .threshold = 1.0,
                 .decay = 0.9}},
      3);
  model.layers()[0].weights[0] = 0.6;
  SpikeTensor input(Geometry{1, 1, 1, 3});
  input.set(0, 0, 0, 0, true);
  input.set(0, 0, 0, 1, true);
  ForwardTrace t = forward(model, input, true);
  CHECK(t.potentials[0][0] == doctest::Approx(0.6));
  CHECK(t.spikes[0][0] == 0.0);
  CHECK(t.potentials[0][1] == doctest::Approx(1.14));
  CHECK(t.spikes[0][1] == 1.0);
  // reset-to-zero: no carry after the spike, no drive at k=2
  CHECK(t.potentials[0][2] == doctest::Approx(0.0));
  CHECK(t.class_counts[0] == 1.0);
}

TEST_CASE("forward is deterministic bit for bit") {
  std::mt19937_64 rng(mix_seed(32, 0));
  SnnModel model = SnnModel::build(
      Shape3{2, 2, 2},
      {LayerSpec{.kind = LayerKind::dense, .units = 6},
       LayerSpec{.kind = LayerKind::dense, .units = 4}},
      11);
  const Geometry g{2, 2, 2, 8};
  SpikeTensor input = random_input(g, rng);
  ForwardTrace a = forward(model, input, true);
  ForwardTrace b = forward(model, input, true);
  CHECK(a.class_counts == b.class_counts);
  CHECK(a.potentials == b.potentials);
  CHECK(a.spikes == b.spikes);
}

TEST_CASE("spikes are binary and reset consistent") {
  std::mt19937_64 rng(mix_seed(33, 0));
  for (int trial = 0; trial < 20; ++trial) {
    SnnModel model = SnnModel::build(
        Shape3{1, 3, 3},
        {LayerSpec{.kind = LayerKind::dense, .units = 7, .threshold = 0.6},
         LayerSpec{.kind = LayerKind::dense, .units = 3, .threshold = 0.6}},
        mix_seed(100, trial));
    // push weights up so some spikes actually happen
    for (auto& ly : model.layers()) {
      for (double& w : ly.weights) w = std::abs(w) * 3.0;
    }
    SpikeTensor input = random_input(Geometry{1, 3, 3, 9}, rng);
    ForwardTrace t = forward(model, input, true);
    bool any_spike = false;
    for (std::size_t l = 0; l < t.spikes.size(); ++l) {
      const double theta = model.layers()[l].spec.threshold;
      for (std::size_t i = 0; i < t.spikes[l].size(); ++i) {
        const double s = t.spikes[l][i];
        CHECK((s == 0.0 || s == 1.0));
        if (s == 1.0) {
          any_spike = true;
          CHECK(t.potentials[l][i] >= theta);
        } else {
          CHECK(t.potentials[l][i] < theta);
        }
      }
    }
    CHECK(any_spike);
  }
}

TEST_CASE("forward rejects geometry mismatches") {
  SnnModel model = SnnModel::build(
      Shape3{2, 4, 4}, {LayerSpec{.kind = LayerKind::dense, .units = 2}}, 1);
  CHECK_THROWS_AS(forward(model, SpikeTensor(Geometry{2, 4, 5, 3}), false),
                  std::invalid_argument);
}

TEST_CASE("backward requires a recorded trace") {
  SnnModel model = SnnModel::build(
      Shape3{1, 1, 1}, {LayerSpec{.kind = LayerKind::dense, .units = 2}}, 1);
  SpikeTensor input(Geometry{1, 1, 1, 2});
  ForwardTrace t = forward(model, input, false);
  CHECK_THROWS_AS(backward(model, t, std::vector<double>(4, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("zero output gradient yields zero gradients everywhere") {
  std::mt19937_64 rng(mix_seed(34, 0));
  SnnModel model = SnnModel::build(
      Shape3{2, 2, 2},
      {LayerSpec{.kind = LayerKind::dense, .units = 5},
       LayerSpec{.kind = LayerKind::dense, .units = 3}},
      21);
  SpikeTensor input = random_input(Geometry{2, 2, 2, 6}, rng);
  ForwardTrace t = forward(model, input, true);
  Gradients g = backward(model, t, std::vector<double>(3 * 6, 0.0));
  for (const auto& wg : g.weight_grads) {
    for (double v : wg) CHECK(v == 0.0);
  }
  for (std::size_t i = 0; i < g.input_grad.size(); ++i) {
    CHECK(g.input_grad[i] == 0.0);
  }
}

TEST_CASE("single layer single timestep matches the closed-form chain") {
  // One dense neuron, K=1: U = w*s, input grad = w * surrogate'(U) * gout.
  SnnModel model = SnnModel::build(
      Shape3{1, 1, 1},
      {LayerSpec{.kind = LayerKind::dense, .units = 1, .threshold = 1.0,
                 .decay = 0.9, .surrogate_alpha = 0.5}},
      3);
  const double w = 0.8;
  model.layers()[0].weights[0] = w;
  SpikeTensor input(Geometry{1, 1, 1, 1});
  input.set(0, 0, 0, 0, true);
  ForwardTrace t = forward(model, input, true);
  const double gout = 1.7;
  Gradients g = backward(model, t, std::vector<double>{gout});
  const double surr = surrogate_grad(w, 1.0, 0.5);
  CHECK(g.input_grad[0] == doctest::Approx(w * surr * gout).epsilon(1e-12));
  CHECK(g.weight_grads[0][0] ==
        doctest::Approx(1.0 * surr * gout).epsilon(1e-12));
  CHECK(g.bias_grads[0][0] == doctest::Approx(surr * gout).epsilon(1e-12));
}

TEST_CASE("backward matches finite differences on random dense models") {
  std::mt19937_64 rng(mix_seed(35, 0));
  std::uniform_int_distribution<int> width(2, 6);
  std::uniform_int_distribution<int> steps(2, 10);
  for (int trial = 0; trial < 8; ++trial) {
    const Geometry g{1, 2, width(rng) > 3 ? 2 : 1, steps(rng)};
    SnnModel model = SnnModel::build(
        Shape3{g.channels, g.width, g.height},
        {LayerSpec{.kind = LayerKind::dense, .units = width(rng),
                   .threshold = 0.8, .decay = 0.85},
         LayerSpec{.kind = LayerKind::dense, .units = 3, .threshold = 0.8,
                   .decay = 0.85}},
        mix_seed(200, trial));
    RealTensor input = random_real_input(g, rng);
    check_gradients(model, input, rng, 1e-4);
  }
}

TEST_CASE("backward matches finite differences on a conv model") {
  std::mt19937_64 rng(mix_seed(36, 0));
  for (int trial = 0; trial < 3; ++trial) {
    const Geometry g{2, 3, 3, 4};
    SnnModel model = SnnModel::build(
        Shape3{2, 3, 3},
        {LayerSpec{.kind = LayerKind::conv2d, .out_channels = 2, .kernel = 3,
                   .threshold = 0.9, .decay = 0.8},
         LayerSpec{.kind = LayerKind::dense, .units = 2, .threshold = 0.9,
                   .decay = 0.8}},
        mix_seed(300, trial));
    RealTensor input = random_real_input(g, rng);
    check_gradients(model, input, rng, 1e-4);
  }
}

TEST_CASE("model construction validates specs") {
  CHECK_THROWS_AS(SnnModel::build(Shape3{1, 1, 1}, {}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SnnModel::build(Shape3{1, 1, 1},
                      {LayerSpec{.kind = LayerKind::dense, .units = 0}}, 0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SnnModel::build(Shape3{1, 1, 1},
                      {LayerSpec{.kind = LayerKind::dense, .units = 2,
                                 .threshold = -1.0}},
                      0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SnnModel::build(Shape3{1, 1, 1},
                      {LayerSpec{.kind = LayerKind::dense, .units = 2,
                                 .decay = 1.0}},
                      0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      SnnModel::build(Shape3{1, 2, 2},
                      {LayerSpec{.kind = LayerKind::conv2d, .out_channels = 2,
                                 .kernel = 2}},
                      0),
      std::invalid_argument);
}

TEST_CASE("sample order does not affect per-sample spike counts") {
  std::mt19937_64 rng(mix_seed(37, 0));
  SnnModel model = SnnModel::build(
      Shape3{1, 2, 2}, {LayerSpec{.kind = LayerKind::dense, .units = 3}}, 5);
  const Geometry g{1, 2, 2, 5};
  SpikeTensor a = random_input(g, rng);
  SpikeTensor b = random_input(g, rng);
  const auto ca1 = forward(model, a, false).class_counts;
  const auto cb1 = forward(model, b, false).class_counts;
  const auto cb2 = forward(model, b, false).class_counts;
  const auto ca2 = forward(model, a, false).class_counts;
  CHECK(ca1 == ca2);
  CHECK(cb1 == cb2);
}
