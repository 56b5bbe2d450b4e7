#ifndef SPIKEATK_ADAM_HPP
#define SPIKEATK_ADAM_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace spikeatk {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Standard Adam with bias correction over a flat parameter vector.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(std::size_t size, AdamConfig cfg = {});

  // params <- params - lr * m_hat / (sqrt(v_hat) + eps)
  void step(std::span<double> params, std::span<const double> grads,
            double lr);

  long step_count() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace spikeatk

#endif  // SPIKEATK_ADAM_HPP
