#include "spikeatk/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spikeatk {

std::string Geometry::describe() const {
  std::ostringstream os;
  os << channels << "x" << width << "x" << height << "x" << timesteps;
  return os.str();
}

namespace {

void require_valid(const Geometry& geom) {
  if (!geom.valid()) {
    throw std::invalid_argument("invalid geometry " + geom.describe() +
                                ": all extents must be positive");
  }
}

}  // namespace

SpikeTensor::SpikeTensor(const Geometry& geom) : geom_(geom) {
  require_valid(geom);
  cells_.assign(geom.cell_count(), 0);
}

SpikeTensor::SpikeTensor(const Geometry& geom, std::vector<std::uint8_t> cells)
    : geom_(geom), cells_(std::move(cells)) {
  require_valid(geom);
  if (cells_.size() != geom.cell_count()) {
    throw std::invalid_argument(
        "cell data size " + std::to_string(cells_.size()) +
        " does not match geometry " + geom.describe() + " (" +
        std::to_string(geom.cell_count()) + " cells)");
  }
  for (std::uint8_t v : cells_) {
    if (v > 1) {
      throw std::invalid_argument("spike tensor cells must be 0 or 1, got " +
                                  std::to_string(int(v)));
    }
  }
}

std::size_t SpikeTensor::count_ones() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::size_t{0});
}

RealTensor::RealTensor(const Geometry& geom) : geom_(geom) {
  require_valid(geom);
  values_.assign(geom.cell_count(), 0.0);
}

RealTensor::RealTensor(const Geometry& geom, std::vector<double> values)
    : geom_(geom), values_(std::move(values)) {
  require_valid(geom);
  if (values_.size() != geom.cell_count()) {
    throw std::invalid_argument(
        "value data size " + std::to_string(values_.size()) +
        " does not match geometry " + geom.describe() + " (" +
        std::to_string(geom.cell_count()) + " cells)");
  }
  check_finite("RealTensor construction");
}

void RealTensor::check_finite(const char* context) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument(std::string(context) +
                                  ": non-finite value at flat index " +
                                  std::to_string(i));
    }
  }
}

void require_same_geometry(const Geometry& a, const Geometry& b,
                           const char* context) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(context) + ": geometry mismatch " +
                                a.describe() + " vs " + b.describe());
  }
}

}  // namespace spikeatk
