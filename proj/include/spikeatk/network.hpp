#ifndef SPIKEATK_NETWORK_HPP
#define SPIKEATK_NETWORK_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikeatk/tensor.hpp"

namespace spikeatk {

enum class LayerKind { dense, conv2d };

// Static description of one layer. Neuron dynamics are discrete-time LIF
// with reset-to-zero:
//   U[k] = decay * U[k-1] * (1 - S[k-1]) + synaptic_input[k]
//   S[k] = 1  iff  U[k] >= threshold
struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  int units = 0;         // dense: output neuron count
  int out_channels = 0;  // conv2d
  int kernel = 0;        // conv2d: odd square kernel, stride 1, same padding
  double threshold = 1.0;        // theta, > 0
  double decay = 0.9;            // lambda, in [0, 1)
  double surrogate_alpha = 0.0;  // escape-rate width; <= 0 means 0.5*theta
};

struct Shape3 {
  int channels = 0;
  int width = 0;
  int height = 0;

  int size() const { return channels * width * height; }
  std::string describe() const;
  friend bool operator==(const Shape3&, const Shape3&) = default;
};

struct Layer {
  LayerSpec spec;
  Shape3 in_shape;
  Shape3 out_shape;
  std::vector<double> weights;  // dense: [out][in]; conv: [co][ci][kx][ky]
  std::vector<double> bias;     // dense: [out]; conv: [co]

  int fan_in() const;
};

// Surrogate spike derivative dS/dU ~= (1/alpha) * exp(-|u - theta| / alpha).
inline double surrogate_grad(double u, double theta, double alpha) {
  return std::exp(-std::abs(u - theta) / alpha) / alpha;
}

// Smooth activation whose exact derivative is surrogate_grad; used by the
// relaxed forward mode that backs the finite-difference gradient checks.
inline double relaxed_activation(double u, double theta, double alpha) {
  return u < theta ? std::exp((u - theta) / alpha)
                   : 2.0 - std::exp(-(u - theta) / alpha);
}

class SnnModel {
 public:
  SnnModel() = default;

  // Validates the spec chain, resolves per-layer alpha defaults and draws
  // initial weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static SnnModel build(const Shape3& input_shape,
                        const std::vector<LayerSpec>& specs,
                        std::uint64_t seed);

  const Shape3& input_shape() const { return input_shape_; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& layers() { return layers_; }
  int class_count() const { return layers_.back().out_shape.size(); }
  std::uint64_t init_seed() const { return init_seed_; }

  std::size_t param_count() const;
  std::vector<double> flatten_params() const;
  void set_params(std::span<const double> flat);

  // Throws unless all weights/biases are finite and shapes are consistent.
  void validate() const;

 private:
  Shape3 input_shape_;
  std::vector<Layer> layers_;
  std::uint64_t init_seed_ = 0;
};

enum class ForwardMode {
  spiking,  // hard threshold, binary spikes
  relaxed   // smooth activation; differentiable end to end
};

struct ForwardTrace {
  ForwardMode mode = ForwardMode::spiking;
  bool recorded = false;
  Geometry input_geometry;
  int timesteps = 0;
  std::vector<double> input;                    // [K][N0], timestep-major
  std::vector<std::vector<double>> potentials;  // per layer, [K][N]
  std::vector<std::vector<double>> spikes;      // per layer, [K][N]
  std::vector<double> class_counts;             // per output class
};

ForwardTrace forward(const SnnModel& model, const SpikeTensor& input,
                     bool record, ForwardMode mode = ForwardMode::spiking);
ForwardTrace forward(const SnnModel& model, const RealTensor& input,
                     bool record, ForwardMode mode = ForwardMode::spiking);

// Winner-take-all readout: index of the highest spike count, ties broken by
// the lowest index.
int winner(std::span<const double> counts);

struct Gradients {
  std::vector<std::vector<double>> weight_grads;  // per layer
  std::vector<std::vector<double>> bias_grads;    // per layer
  RealTensor input_grad;
};

// Reverse-mode backpropagation through time over a recorded trace.
// grad_output is dL/dS for every final-layer spike, [K][N^L] timestep-major.
Gradients backward(const SnnModel& model, const ForwardTrace& trace,
                   std::span<const double> grad_output);

// Broadcasts per-class spike-count gradients over all timesteps
// (counts are plain sums of final-layer spikes).
std::vector<double> expand_count_grads(std::span<const double> count_grads,
                                       int timesteps);

std::vector<double> flatten_gradients(const SnnModel& model,
                                      const Gradients& grads);

}  // namespace spikeatk

#endif  // SPIKEATK_NETWORK_HPP
