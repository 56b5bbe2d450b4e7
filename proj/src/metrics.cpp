#include "spikeatk/metrics.hpp"

#include <stdexcept>

namespace spikeatk {

SpikeTensor diff_tensor(const SpikeTensor& a, const SpikeTensor& b) {
  require_same_geometry(a.geometry(), b.geometry(), "diff_tensor");
  SpikeTensor y(a.geometry());
  for (std::size_t i = 0; i < a.size(); ++i) {
    y.set_flat(i, a[i] != b[i]);
  }
  return y;
}

double perturbation_size(const SpikeTensor& a, const SpikeTensor& b) {
  require_same_geometry(a.geometry(), b.geometry(), "perturbation_size");
  std::size_t flips = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    flips += a[i] != b[i] ? 1 : 0;
  }
  return 100.0 * static_cast<double>(flips) /
         static_cast<double>(a.geometry().cell_count());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) {
    throw std::invalid_argument("sample_variance requires at least 2 cells, got " +
                                std::to_string(values.size()));
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(values.size() - 1);
}

double sample_variance(const SpikeTensor& y) {
  if (y.size() < 2) {
    throw std::invalid_argument("sample_variance requires at least 2 cells, got " +
                                std::to_string(y.size()));
  }
  // Binary data: ss = ones*(1-mean)^2 + zeros*mean^2, computed directly.
  const double n = static_cast<double>(y.size());
  const double ones = static_cast<double>(y.count_ones());
  const double mean = ones / n;
  const double ss = ones * (1.0 - mean) * (1.0 - mean) +
                    (n - ones) * mean * mean;
  return ss / (n - 1.0);
}

}  // namespace spikeatk
