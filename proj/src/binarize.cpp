#include "spikeatk/binarize.hpp"

#include <cmath>
#include <stdexcept>

#include "spikeatk/rng.hpp"

namespace spikeatk {

namespace {

// Keeps the logistic away from saturating to exactly 0 or 1 in double
// precision; |z| = 34 leaves a margin of ~1.7e-15.
constexpr double kLogitClamp = 34.0;

double logistic(double z) {
  if (z > kLogitClamp) z = kLogitClamp;
  if (z < -kLogitClamp) z = -kLogitClamp;
  return 1.0 / (1.0 + std::exp(-z));
}

void require_unit_range(const RealTensor& x, const char* context) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
      throw std::invalid_argument(std::string(context) + ": value " +
                                  std::to_string(x[i]) + " at flat index " +
                                  std::to_string(i) +
                                  " is outside [0, 1]; upstream bug");
    }
  }
}

}  // namespace

void RelaxationParams::validate() const {
  if (!(tau > 0.0)) {
    throw std::invalid_argument("temperature tau must be > 0, got " +
                                std::to_string(tau));
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("perturbation scale beta must be in (0, 1], got " +
                                std::to_string(beta));
  }
}

RealTensor gumbel_softmax(const RealTensor& x, const RelaxationParams& p) {
  p.validate();
  x.check_finite("gumbel_softmax input");
  RealTensor pr(x.geometry());
  if (p.noise) {
    auto rng = std::mt19937_64(p.seed);
    std::uniform_real_distribution<double> unit(std::nextafter(0.0, 1.0), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double g0 = -std::log(-std::log(unit(rng)));
      const double g1 = -std::log(-std::log(unit(rng)));
      pr[i] = logistic((x[i] + g1 - g0) / p.tau);
    }
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      pr[i] = logistic(x[i] / p.tau);
    }
  }
  return pr;
}

RealTensor apply_perturbation(const SpikeTensor& input, const RealTensor& pr,
                              double beta) {
  require_same_geometry(input.geometry(), pr.geometry(), "apply_perturbation");
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("perturbation scale beta must be in (0, 1], got " +
                                std::to_string(beta));
  }
  RealTensor out(input.geometry());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = input[i] ? 1.0 - pr[i] * beta : pr[i] * beta;
  }
  return out;
}

SpikeTensor ste_binarize(const RealTensor& x) {
  require_unit_range(x, "ste_binarize");
  SpikeTensor out(x.geometry());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.set_flat(i, x[i] > 0.5);
  }
  return out;
}

SpikeTensor round_binary(const RealTensor& x) {
  require_unit_range(x, "round_binary");
  SpikeTensor out(x.geometry());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.set_flat(i, x[i] >= 0.5);
  }
  return out;
}

RealTensor relaxation_chain_grad(const RealTensor& upstream,
                                 const RealTensor& pr, double tau, double beta,
                                 const SpikeTensor& input) {
  require_same_geometry(upstream.geometry(), pr.geometry(),
                        "relaxation_chain_grad");
  require_same_geometry(upstream.geometry(), input.geometry(),
                        "relaxation_chain_grad");
  if (pr.size() == 0) {
    throw std::invalid_argument(
        "relaxation_chain_grad: missing cached Pr tensor");
  }
  if (!(tau > 0.0)) {
    throw std::invalid_argument("temperature tau must be > 0, got " +
                                std::to_string(tau));
  }
  RealTensor out(upstream.geometry());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double branch = input[i] ? -beta : beta;
    out[i] = upstream[i] * branch * pr[i] * (1.0 - pr[i]) / tau;
  }
  return out;
}

}  // namespace spikeatk
