#include "spikeatk/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spikeatk {

AdamOptimizer::AdamOptimizer(std::size_t size, AdamConfig cfg)
    : cfg_(cfg), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::step(std::span<double> params,
                         std::span<const double> grads, double lr) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument(
        "adam step shape mismatch: state " + std::to_string(m_.size()) +
        ", params " + std::to_string(params.size()) + ", grads " +
        std::to_string(grads.size()));
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g * g;
    const double m_hat = m_[i] / bc1;
    const double v_hat = v_[i] / bc2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
  }
}

}  // namespace spikeatk
