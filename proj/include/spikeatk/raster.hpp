#ifndef SPIKEATK_RASTER_HPP
#define SPIKEATK_RASTER_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "spikeatk/tensor.hpp"

namespace spikeatk {

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::array<std::uint8_t, 3>> pixels;  // row-major, rows are y

  const std::array<std::uint8_t, 3>& at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t count_red() const;
};

// Projects the timesteps [window_begin, window_end) of an original/adversarial
// pair onto one W x H plane: pixels whose cells all agree and carry at least
// one spike are black, pixels with any differing cell are red, the rest white.
RasterImage render_raster_image(const SpikeTensor& original,
                                const SpikeTensor& adversarial,
                                int window_begin, int window_end);

// Same projection written as a binary PPM (P6).
void render_raster(const SpikeTensor& original, const SpikeTensor& adversarial,
                   int window_begin, int window_end,
                   const std::filesystem::path& path);

}  // namespace spikeatk

#endif  // SPIKEATK_RASTER_HPP
