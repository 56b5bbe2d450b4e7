#ifndef SPIKEATK_TENSOR_HPP
#define SPIKEATK_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spikeatk {

// Extent of a spike tensor: channel/polarity planes of width x height pixels
// over discrete timesteps. Audio data uses 1x1 spatial extent with one
// channel per frequency band.
struct Geometry {
  int channels = 0;
  int width = 0;
  int height = 0;
  int timesteps = 0;

  std::size_t spatial_size() const {
    return static_cast<std::size_t>(channels) * width * height;
  }
  std::size_t cell_count() const { return spatial_size() * timesteps; }
  bool valid() const {
    return channels > 0 && width > 0 && height > 0 && timesteps > 0;
  }
  std::string describe() const;

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

// Binary 4-D event tensor. Storage is timestep-major so the cells of one
// timestep form a contiguous frame of spatial_size() values, ordered
// (channel, x, y).
class SpikeTensor {
 public:
  SpikeTensor() = default;
  explicit SpikeTensor(const Geometry& geom);
  SpikeTensor(const Geometry& geom, std::vector<std::uint8_t> cells);

  static SpikeTensor zeros(const Geometry& geom) { return SpikeTensor(geom); }

  const Geometry& geometry() const { return geom_; }
  std::size_t size() const { return cells_.size(); }

  std::size_t index(int c, int x, int y, int k) const {
    return ((static_cast<std::size_t>(k) * geom_.channels + c) * geom_.width +
            x) * geom_.height + y;
  }
  std::uint8_t at(int c, int x, int y, int k) const {
    return cells_[index(c, x, y, k)];
  }
  void set(int c, int x, int y, int k, bool value) {
    cells_[index(c, x, y, k)] = value ? 1 : 0;
  }
  std::uint8_t operator[](std::size_t flat) const { return cells_[flat]; }
  void set_flat(std::size_t flat, bool value) { cells_[flat] = value ? 1 : 0; }

  std::span<const std::uint8_t> cells() const { return cells_; }
  // Contiguous (channel, x, y) frame of one timestep.
  std::span<const std::uint8_t> frame(int k) const {
    return std::span<const std::uint8_t>(cells_).subspan(
        static_cast<std::size_t>(k) * geom_.spatial_size(),
        geom_.spatial_size());
  }

  std::size_t count_ones() const;

  friend bool operator==(const SpikeTensor&, const SpikeTensor&) = default;

 private:
  Geometry geom_;
  std::vector<std::uint8_t> cells_;
};

// Real-valued tensor sharing SpikeTensor's shape and layout. Houses relaxed
// inputs, perturbation probabilities and input-space gradients.
class RealTensor {
 public:
  RealTensor() = default;
  explicit RealTensor(const Geometry& geom);
  RealTensor(const Geometry& geom, std::vector<double> values);

  static RealTensor zeros(const Geometry& geom) { return RealTensor(geom); }

  const Geometry& geometry() const { return geom_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int c, int x, int y, int k) const {
    return ((static_cast<std::size_t>(k) * geom_.channels + c) * geom_.width +
            x) * geom_.height + y;
  }
  double at(int c, int x, int y, int k) const {
    return values_[index(c, x, y, k)];
  }
  void set(int c, int x, int y, int k, double v) {
    values_[index(c, x, y, k)] = v;
  }
  double operator[](std::size_t flat) const { return values_[flat]; }
  double& operator[](std::size_t flat) { return values_[flat]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Throws if any value is NaN or infinite.
  void check_finite(const char* context) const;

  friend bool operator==(const RealTensor&, const RealTensor&) = default;

 private:
  Geometry geom_;
  std::vector<double> values_;
};

// Throws std::invalid_argument naming both geometries unless they match.
void require_same_geometry(const Geometry& a, const Geometry& b,
                           const char* context);

}  // namespace spikeatk

#endif  // SPIKEATK_TENSOR_HPP
