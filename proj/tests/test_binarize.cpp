#include "doctest.h"
#include "spikeatk/binarize.hpp"
#include "spikeatk/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace spikeatk;

namespace {

const Geometry kGeom{1, 2, 2, 2};  // 8 cells

RealTensor constant(const Geometry& g, double v) {
  RealTensor t(g);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = v;
  return t;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

TEST_CASE("noise-off gumbel softmax is the plain logistic") {
  RelaxationParams p{.tau = 1.0, .beta = 1.0, .noise = false, .seed = 0};
  CHECK(gumbel_softmax(constant(kGeom, 0.0), p)[0] == doctest::Approx(0.5));

  p.tau = 0.5;
  CHECK(gumbel_softmax(constant(kGeom, 1.0), p)[0] ==
        doctest::Approx(logistic(2.0)).epsilon(1e-12));
  CHECK(gumbel_softmax(constant(kGeom, 1.0), p)[0] ==
        doctest::Approx(0.880797).epsilon(1e-6));

  p.tau = 1.0;
  CHECK(gumbel_softmax(constant(kGeom, 10.0), p)[0] ==
        doctest::Approx(0.9999546).epsilon(1e-7));
}

TEST_CASE("gumbel softmax outputs stay strictly inside (0,1)") {
  std::mt19937_64 rng(mix_seed(41, 0));
  std::uniform_real_distribution<double> extreme(-1e6, 1e6);
  for (double tau : {1e-3, 1.0, 1e3}) {
    for (bool noise : {false, true}) {
      RealTensor x(kGeom);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = extreme(rng);
      x[0] = 1e300;
      x[1] = -1e300;
      RelaxationParams p{.tau = tau, .beta = 1.0, .noise = noise, .seed = 9};
      RealTensor pr = gumbel_softmax(x, p);
      for (std::size_t i = 0; i < pr.size(); ++i) {
        CHECK(pr[i] > 0.0);
        CHECK(pr[i] < 1.0);
      }
    }
  }
}

TEST_CASE("noise-off gumbel softmax is monotone in x and flattens with tau") {
  RelaxationParams p{.tau = 1.0, .beta = 1.0, .noise = false, .seed = 0};
  double prev = 0.0;
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    const double v = gumbel_softmax(constant(kGeom, x), p)[0];
    CHECK(v > prev);
    prev = v;
  }
  // larger tau moves outputs toward 0.5 for positive x
  RelaxationParams cold{.tau = 0.5, .beta = 1.0, .noise = false, .seed = 0};
  RelaxationParams hot{.tau = 5.0, .beta = 1.0, .noise = false, .seed = 0};
  const double sharp = gumbel_softmax(constant(kGeom, 1.0), cold)[0];
  const double soft = gumbel_softmax(constant(kGeom, 1.0), hot)[0];
  CHECK(sharp > soft);
  CHECK(soft > 0.5);
}

TEST_CASE("gumbel softmax is deterministic under a fixed seed") {
  std::mt19937_64 rng(mix_seed(42, 0));
  RealTensor x(kGeom);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = val(rng);
  RelaxationParams p{.tau = 0.7, .beta = 1.0, .noise = true, .seed = 1234};
  CHECK(gumbel_softmax(x, p) == gumbel_softmax(x, p));
  RelaxationParams other = p;
  other.seed = 1235;
  CHECK(gumbel_softmax(x, p) != gumbel_softmax(x, other));
}

TEST_CASE("gumbel softmax rejects non-positive temperature") {
  RelaxationParams p{.tau = 0.0, .beta = 1.0, .noise = false, .seed = 0};
  CHECK_THROWS_AS(gumbel_softmax(constant(kGeom, 0.0), p),
                  std::invalid_argument);
}

TEST_CASE("apply perturbation follows the two branches") {
  SpikeTensor input(kGeom);
  input.set_flat(1, true);
  RealTensor pr = constant(kGeom, 0.8);
  RealTensor out = apply_perturbation(input, pr, 1.0);
  CHECK(out[0] == doctest::Approx(0.8));   // silent cell moves up
  CHECK(out[1] == doctest::Approx(0.2));   // spiking cell moves down

  RealTensor half = constant(kGeom, 0.5);
  RealTensor out2 = apply_perturbation(input, half, 1.0);
  CHECK(out2[0] == doctest::Approx(0.5));
  CHECK(out2[1] == doctest::Approx(0.5));

  CHECK_THROWS_AS(apply_perturbation(input, pr, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_perturbation(input, pr, 1.5), std::invalid_argument);
}

TEST_CASE("ste binarize thresholds at one half") {
  RealTensor x(kGeom);
  x[0] = 0.7;
  x[1] = 0.3;
  x[2] = 0.5;  // tie maps to 0
  SpikeTensor out = ste_binarize(x);
  CHECK(out[0] == 1);
  CHECK(out[1] == 0);
  CHECK(out[2] == 0);

  RealTensor bad(kGeom);
  bad[0] = 1.3;
  CHECK_THROWS_AS(ste_binarize(bad), std::invalid_argument);
}

TEST_CASE("round binary rounds half up") {
  RealTensor x(kGeom);
  x[0] = 0.49;
  x[1] = 0.51;
  x[2] = 0.5;
  SpikeTensor out = round_binary(x);
  CHECK(out[0] == 0);
  CHECK(out[1] == 1);
  CHECK(out[2] == 1);

  CHECK(round_binary(RealTensor(kGeom)).count_ones() == 0);
}

TEST_CASE("binarized perturbation flips exactly the cells with Pr > 0.5") {
  std::mt19937_64 rng(mix_seed(43, 0));
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::bernoulli_distribution bit(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    SpikeTensor input(kGeom);
    RealTensor pr(kGeom);
    for (std::size_t i = 0; i < input.size(); ++i) {
      input.set_flat(i, bit(rng));
      double v = prob(rng);
      if (v == 0.5) v = 0.25;
      pr[i] = v;
    }
    SpikeTensor adv = ste_binarize(apply_perturbation(input, pr, 1.0));
    for (std::size_t i = 0; i < input.size(); ++i) {
      const bool flipped = adv[i] != input[i];
      CHECK(flipped == (pr[i] > 0.5));
    }
  }
}

TEST_CASE("relaxation chain gradient analytic values") {
  SpikeTensor input(kGeom);
  RealTensor pr = constant(kGeom, 0.5);
  RealTensor upstream = constant(kGeom, 1.0);

  RealTensor g = relaxation_chain_grad(upstream, pr, 1.0, 1.0, input);
  CHECK(g[0] == doctest::Approx(0.25).epsilon(1e-12));

  SpikeTensor spiking(kGeom);
  for (std::size_t i = 0; i < spiking.size(); ++i) spiking.set_flat(i, true);
  RealTensor g1 = relaxation_chain_grad(upstream, pr, 1.0, 1.0, spiking);
  CHECK(g1[0] == doctest::Approx(-0.25).epsilon(1e-12));

  RealTensor zeros(kGeom);
  RealTensor gz = relaxation_chain_grad(zeros, pr, 1.0, 1.0, input);
  for (std::size_t i = 0; i < gz.size(); ++i) CHECK(gz[i] == 0.0);
}

TEST_CASE("relaxation chain gradient matches finite differences") {
  // Composed map with the STE replaced by the identity:
  //   f(x) = apply_perturbation(I, logistic(x / tau), beta)
  std::mt19937_64 rng(mix_seed(44, 0));
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::bernoulli_distribution bit(0.5);
  const double tau = 0.8, beta = 0.9, eps = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    SpikeTensor input(kGeom);
    RealTensor x(kGeom), upstream(kGeom);
    for (std::size_t i = 0; i < x.size(); ++i) {
      input.set_flat(i, bit(rng));
      x[i] = val(rng);
      upstream[i] = val(rng);
    }
    RelaxationParams p{.tau = tau, .beta = beta, .noise = false, .seed = 0};
    RealTensor pr = gumbel_softmax(x, p);
    RealTensor analytic = relaxation_chain_grad(upstream, pr, tau, beta, input);
    for (std::size_t i = 0; i < x.size(); ++i) {
      RealTensor xp = x, xm = x;
      xp[i] += eps;
      xm[i] -= eps;
      const double up =
          apply_perturbation(input, gumbel_softmax(xp, p), beta)[i];
      const double down =
          apply_perturbation(input, gumbel_softmax(xm, p), beta)[i];
      const double fd = upstream[i] * (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
      CHECK(std::abs(fd - analytic[i]) / denom < 1e-6);
    }
  }
}
