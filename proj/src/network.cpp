#include "spikeatk/network.hpp"

#include <sstream>
#include <stdexcept>

#include "spikeatk/rng.hpp"

namespace spikeatk {

std::string Shape3::describe() const {
  std::ostringstream os;
  os << channels << "x" << width << "x" << height;
  return os.str();
}

int Layer::fan_in() const {
  if (spec.kind == LayerKind::dense) return in_shape.size();
  return in_shape.channels * spec.kernel * spec.kernel;
}

namespace {

void validate_spec(const LayerSpec& spec, int index) {
  const std::string where = "layer " + std::to_string(index);
  if (spec.threshold <= 0.0) {
    throw std::invalid_argument(where + ": threshold must be > 0");
  }
  if (spec.decay < 0.0 || spec.decay >= 1.0) {
    throw std::invalid_argument(where + ": decay must be in [0, 1)");
  }
  if (spec.kind == LayerKind::dense) {
    if (spec.units <= 0) {
      throw std::invalid_argument(where + ": dense layer needs units > 0");
    }
  } else {
    if (spec.out_channels <= 0) {
      throw std::invalid_argument(where + ": conv2d needs out_channels > 0");
    }
    if (spec.kernel <= 0 || spec.kernel % 2 == 0) {
      throw std::invalid_argument(where + ": conv2d kernel must be odd and > 0");
    }
  }
}

std::size_t weight_count(const LayerSpec& spec, const Shape3& in) {
  if (spec.kind == LayerKind::dense) {
    return static_cast<std::size_t>(spec.units) * in.size();
  }
  return static_cast<std::size_t>(spec.out_channels) * in.channels *
         spec.kernel * spec.kernel;
}

void layer_forward(const Layer& ly, const double* in, double* out) {
  if (ly.spec.kind == LayerKind::dense) {
    const int n_out = ly.out_shape.size();
    const int n_in = ly.in_shape.size();
    for (int o = 0; o < n_out; ++o) {
      const double* w = &ly.weights[static_cast<std::size_t>(o) * n_in];
      double acc = ly.bias[o];
      for (int i = 0; i < n_in; ++i) acc += w[i] * in[i];
      out[o] = acc;
    }
    return;
  }
  const int ci_n = ly.in_shape.channels, w = ly.in_shape.width,
            h = ly.in_shape.height;
  const int co_n = ly.spec.out_channels, kk = ly.spec.kernel, p = kk / 2;
  auto in_off = [&](int c, int x, int y) { return (c * w + x) * h + y; };
  auto w_off = [&](int co, int ci, int dx, int dy) {
    return ((co * ci_n + ci) * kk + dx) * kk + dy;
  };
  for (int co = 0; co < co_n; ++co) {
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        double acc = ly.bias[co];
        for (int ci = 0; ci < ci_n; ++ci) {
          for (int dx = 0; dx < kk; ++dx) {
            const int xi = x + dx - p;
            if (xi < 0 || xi >= w) continue;
            for (int dy = 0; dy < kk; ++dy) {
              const int yi = y + dy - p;
              if (yi < 0 || yi >= h) continue;
              acc += ly.weights[w_off(co, ci, dx, dy)] * in[in_off(ci, xi, yi)];
            }
          }
        }
        out[in_off(co, x, y)] = acc;
      }
    }
  }
}

// Transposed map of layer_forward; overwrites din.
void layer_backward_input(const Layer& ly, const double* dout, double* din) {
  const int n_in = ly.in_shape.size();
  for (int i = 0; i < n_in; ++i) din[i] = 0.0;
  if (ly.spec.kind == LayerKind::dense) {
    const int n_out = ly.out_shape.size();
    for (int o = 0; o < n_out; ++o) {
      const double* w = &ly.weights[static_cast<std::size_t>(o) * n_in];
      const double d = dout[o];
      if (d == 0.0) continue;
      for (int i = 0; i < n_in; ++i) din[i] += w[i] * d;
    }
    return;
  }
  const int ci_n = ly.in_shape.channels, w = ly.in_shape.width,
            h = ly.in_shape.height;
  const int co_n = ly.spec.out_channels, kk = ly.spec.kernel, p = kk / 2;
  auto in_off = [&](int c, int x, int y) { return (c * w + x) * h + y; };
  auto w_off = [&](int co, int ci, int dx, int dy) {
    return ((co * ci_n + ci) * kk + dx) * kk + dy;
  };
  for (int co = 0; co < co_n; ++co) {
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        const double d = dout[in_off(co, x, y)];
        if (d == 0.0) continue;
        for (int ci = 0; ci < ci_n; ++ci) {
          for (int dx = 0; dx < kk; ++dx) {
            const int xi = x + dx - p;
            if (xi < 0 || xi >= w) continue;
            for (int dy = 0; dy < kk; ++dy) {
              const int yi = y + dy - p;
              if (yi < 0 || yi >= h) continue;
              din[in_off(ci, xi, yi)] += ly.weights[w_off(co, ci, dx, dy)] * d;
            }
          }
        }
      }
    }
  }
}

// Accumulates dL/dW and dL/db for one timestep.
void layer_param_grads(const Layer& ly, const double* dout, const double* in,
                       double* wg, double* bg) {
  if (ly.spec.kind == LayerKind::dense) {
    const int n_out = ly.out_shape.size();
    const int n_in = ly.in_shape.size();
    for (int o = 0; o < n_out; ++o) {
      const double d = dout[o];
      bg[o] += d;
      if (d == 0.0) continue;
      double* w = &wg[static_cast<std::size_t>(o) * n_in];
      for (int i = 0; i < n_in; ++i) w[i] += d * in[i];
    }
    return;
  }
  const int ci_n = ly.in_shape.channels, w = ly.in_shape.width,
            h = ly.in_shape.height;
  const int co_n = ly.spec.out_channels, kk = ly.spec.kernel, p = kk / 2;
  auto in_off = [&](int c, int x, int y) { return (c * w + x) * h + y; };
  auto w_off = [&](int co, int ci, int dx, int dy) {
    return ((co * ci_n + ci) * kk + dx) * kk + dy;
  };
  for (int co = 0; co < co_n; ++co) {
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) {
        const double d = dout[in_off(co, x, y)];
        bg[co] += d;
        if (d == 0.0) continue;
        for (int ci = 0; ci < ci_n; ++ci) {
          for (int dx = 0; dx < kk; ++dx) {
            const int xi = x + dx - p;
            if (xi < 0 || xi >= w) continue;
            for (int dy = 0; dy < kk; ++dy) {
              const int yi = y + dy - p;
              if (yi < 0 || yi >= h) continue;
              wg[w_off(co, ci, dx, dy)] += d * in[in_off(ci, xi, yi)];
            }
          }
        }
      }
    }
  }
}

double resolved_alpha(const Layer& ly) {
  return ly.spec.surrogate_alpha > 0.0 ? ly.spec.surrogate_alpha
                                       : 0.5 * ly.spec.threshold;
}

ForwardTrace run_forward(const SnnModel& model, const Geometry& geom,
                         std::vector<double> flat_input, bool record,
                         ForwardMode mode) {
  const Shape3 in_shape{geom.channels, geom.width, geom.height};
  if (!(in_shape == model.input_shape())) {
    throw std::invalid_argument("input spatial shape " + in_shape.describe() +
                                " does not match model input " +
                                model.input_shape().describe());
  }
  const int steps = geom.timesteps;
  const auto& layers = model.layers();
  const std::size_t n_layers = layers.size();

  ForwardTrace trace;
  trace.mode = mode;
  trace.recorded = record;
  trace.input_geometry = geom;
  trace.timesteps = steps;
  if (record) {
    trace.potentials.resize(n_layers);
    trace.spikes.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
      const std::size_t n = layers[l].out_shape.size();
      trace.potentials[l].assign(n * steps, 0.0);
      trace.spikes[l].assign(n * steps, 0.0);
    }
  }

  std::vector<std::vector<double>> u_state(n_layers), s_state(n_layers),
      drive(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t n = layers[l].out_shape.size();
    u_state[l].assign(n, 0.0);
    s_state[l].assign(n, 0.0);
    drive[l].assign(n, 0.0);
  }
  trace.class_counts.assign(model.class_count(), 0.0);

  const std::size_t n0 = in_shape.size();
  for (int k = 0; k < steps; ++k) {
    const double* below = &flat_input[static_cast<std::size_t>(k) * n0];
    for (std::size_t l = 0; l < n_layers; ++l) {
      const Layer& ly = layers[l];
      const int n = ly.out_shape.size();
      const double theta = ly.spec.threshold;
      const double lambda = ly.spec.decay;
      const double alpha = resolved_alpha(ly);
      layer_forward(ly, below, drive[l].data());
      for (int i = 0; i < n; ++i) {
        const double u =
            lambda * u_state[l][i] * (1.0 - s_state[l][i]) + drive[l][i];
        const double s = mode == ForwardMode::spiking
                             ? (u >= theta ? 1.0 : 0.0)
                             : relaxed_activation(u, theta, alpha);
        u_state[l][i] = u;
        s_state[l][i] = s;
      }
      if (record) {
        const std::size_t base = static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
          trace.potentials[l][base + i] = u_state[l][i];
          trace.spikes[l][base + i] = s_state[l][i];
        }
      }
      below = s_state[l].data();
    }
    const auto& top = s_state[n_layers - 1];
    for (std::size_t i = 0; i < top.size(); ++i) trace.class_counts[i] += top[i];
  }
  trace.input = std::move(flat_input);
  if (!record) trace.input.clear();
  return trace;
}

}  // namespace

SnnModel SnnModel::build(const Shape3& input_shape,
                         const std::vector<LayerSpec>& specs,
                         std::uint64_t seed) {
  if (input_shape.size() <= 0) {
    throw std::invalid_argument("model input shape must be non-empty, got " +
                                input_shape.describe());
  }
  if (specs.empty()) {
    throw std::invalid_argument("model needs at least one layer");
  }
  SnnModel model;
  model.input_shape_ = input_shape;
  model.init_seed_ = seed;
  Shape3 shape = input_shape;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    LayerSpec spec = specs[l];
    validate_spec(spec, static_cast<int>(l));
    if (spec.surrogate_alpha <= 0.0) {
      spec.surrogate_alpha = 0.5 * spec.threshold;
    }
    Layer layer;
    layer.spec = spec;
    layer.in_shape = shape;
    layer.out_shape = spec.kind == LayerKind::dense
                          ? Shape3{spec.units, 1, 1}
                          : Shape3{spec.out_channels, shape.width,
                                   shape.height};
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.fan_in()));
    auto rng = make_rng(seed, l);
    std::uniform_real_distribution<double> dist(-bound, bound);
    layer.weights.resize(weight_count(spec, shape));
    for (double& w : layer.weights) w = dist(rng);
    layer.bias.assign(spec.kind == LayerKind::dense ? spec.units
                                                    : spec.out_channels,
                      0.0);
    shape = layer.out_shape;
    model.layers_.push_back(std::move(layer));
  }
  return model;
}

std::size_t SnnModel::param_count() const {
  std::size_t n = 0;
  for (const Layer& ly : layers_) n += ly.weights.size() + ly.bias.size();
  return n;
}

std::vector<double> SnnModel::flatten_params() const {
  std::vector<double> flat;
  flat.reserve(param_count());
  for (const Layer& ly : layers_) {
    flat.insert(flat.end(), ly.weights.begin(), ly.weights.end());
    flat.insert(flat.end(), ly.bias.begin(), ly.bias.end());
  }
  return flat;
}

void SnnModel::set_params(std::span<const double> flat) {
  if (flat.size() != param_count()) {
    throw std::invalid_argument("parameter vector size " +
                                std::to_string(flat.size()) +
                                " does not match model parameter count " +
                                std::to_string(param_count()));
  }
  std::size_t pos = 0;
  for (Layer& ly : layers_) {
    std::copy_n(flat.begin() + pos, ly.weights.size(), ly.weights.begin());
    pos += ly.weights.size();
    std::copy_n(flat.begin() + pos, ly.bias.size(), ly.bias.begin());
    pos += ly.bias.size();
  }
}

void SnnModel::validate() const {
  if (layers_.empty()) throw std::invalid_argument("model has no layers");
  Shape3 shape = input_shape_;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& ly = layers_[l];
    if (!(ly.in_shape == shape)) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  " input shape " + ly.in_shape.describe() +
                                  " breaks the chain (expected " +
                                  shape.describe() + ")");
    }
    if (ly.weights.size() != weight_count(ly.spec, ly.in_shape)) {
      throw std::invalid_argument("layer " + std::to_string(l) +
                                  " weight count mismatch");
    }
    for (double w : ly.weights) {
      if (!std::isfinite(w)) {
        throw std::invalid_argument("layer " + std::to_string(l) +
                                    " has non-finite weights");
      }
    }
    for (double b : ly.bias) {
      if (!std::isfinite(b)) {
        throw std::invalid_argument("layer " + std::to_string(l) +
                                    " has non-finite bias");
      }
    }
    shape = ly.out_shape;
  }
}

ForwardTrace forward(const SnnModel& model, const SpikeTensor& input,
                     bool record, ForwardMode mode) {
  std::vector<double> flat(input.size());
  const auto cells = input.cells();
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = cells[i];
  return run_forward(model, input.geometry(), std::move(flat), record, mode);
}

ForwardTrace forward(const SnnModel& model, const RealTensor& input,
                     bool record, ForwardMode mode) {
  const auto values = input.values();
  return run_forward(model, input.geometry(),
                     std::vector<double>(values.begin(), values.end()), record,
                     mode);
}

int winner(std::span<const double> counts) {
  if (counts.empty()) {
    throw std::invalid_argument("winner requires a non-empty count vector");
  }
  int best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[best]) best = static_cast<int>(i);
  }
  return best;
}

Gradients backward(const SnnModel& model, const ForwardTrace& trace,
                   std::span<const double> grad_output) {
  if (!trace.recorded) {
    throw std::invalid_argument(
        "backward needs a trace recorded with the record flag set");
  }
  const auto& layers = model.layers();
  const std::size_t n_layers = layers.size();
  const int steps = trace.timesteps;
  const std::size_t n_top = layers.back().out_shape.size();
  if (grad_output.size() != n_top * steps) {
    throw std::invalid_argument(
        "grad_output size " + std::to_string(grad_output.size()) +
        " does not match timesteps x classes = " +
        std::to_string(n_top * steps));
  }

  Gradients grads;
  grads.weight_grads.resize(n_layers);
  grads.bias_grads.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    grads.weight_grads[l].assign(layers[l].weights.size(), 0.0);
    grads.bias_grads[l].assign(layers[l].bias.size(), 0.0);
  }

  // dL/dS flowing into the current layer from above (or from the loss).
  std::vector<double> ds_ext(grad_output.begin(), grad_output.end());
  std::vector<double> delta_u;
  for (std::size_t li = n_layers; li-- > 0;) {
    const Layer& ly = layers[li];
    const int n = ly.out_shape.size();
    const double theta = ly.spec.threshold;
    const double lambda = ly.spec.decay;
    const double alpha = resolved_alpha(ly);
    const auto& potentials = trace.potentials[li];
    const auto& spikes = trace.spikes[li];

    delta_u.assign(static_cast<std::size_t>(n) * steps, 0.0);
    for (int k = steps - 1; k >= 0; --k) {
      const std::size_t base = static_cast<std::size_t>(k) * n;
      const std::size_t next = base + n;
      for (int i = 0; i < n; ++i) {
        const double du_next =
            k + 1 < steps ? delta_u[next + i] : 0.0;
        const double u = potentials[base + i];
        const double s = spikes[base + i];
        // dL/dS[k]: external flow plus the reset path dU[k+1]/dS[k].
        const double ds_total = ds_ext[base + i] - lambda * u * du_next;
        delta_u[base + i] = ds_total * surrogate_grad(u, theta, alpha) +
                            du_next * lambda * (1.0 - s);
      }
    }

    const std::vector<double>& below =
        li > 0 ? trace.spikes[li - 1] : trace.input;
    const std::size_t n_below = li > 0
                                    ? layers[li - 1].out_shape.size()
                                    : model.input_shape().size();
    for (int k = 0; k < steps; ++k) {
      layer_param_grads(ly, &delta_u[static_cast<std::size_t>(k) * n],
                        &below[static_cast<std::size_t>(k) * n_below],
                        grads.weight_grads[li].data(),
                        grads.bias_grads[li].data());
    }

    std::vector<double> ds_below(n_below * steps);
    for (int k = 0; k < steps; ++k) {
      layer_backward_input(ly, &delta_u[static_cast<std::size_t>(k) * n],
                           &ds_below[static_cast<std::size_t>(k) * n_below]);
    }
    ds_ext = std::move(ds_below);
  }

  grads.input_grad = RealTensor(trace.input_geometry, std::move(ds_ext));
  return grads;
}

std::vector<double> expand_count_grads(std::span<const double> count_grads,
                                       int timesteps) {
  std::vector<double> out(count_grads.size() * timesteps);
  for (int k = 0; k < timesteps; ++k) {
    for (std::size_t i = 0; i < count_grads.size(); ++i) {
      out[static_cast<std::size_t>(k) * count_grads.size() + i] =
          count_grads[i];
    }
  }
  return out;
}

std::vector<double> flatten_gradients(const SnnModel& model,
                                      const Gradients& grads) {
  std::vector<double> flat;
  flat.reserve(model.param_count());
  for (std::size_t l = 0; l < model.layers().size(); ++l) {
    flat.insert(flat.end(), grads.weight_grads[l].begin(),
                grads.weight_grads[l].end());
    flat.insert(flat.end(), grads.bias_grads[l].begin(),
                grads.bias_grads[l].end());
  }
  return flat;
}

}  // namespace spikeatk
