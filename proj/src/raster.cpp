#include "spikeatk/raster.hpp"

#include <fstream>
#include <stdexcept>

#include "spikeatk/metrics.hpp"

namespace spikeatk {

namespace {

constexpr std::array<std::uint8_t, 3> kWhite{255, 255, 255};
constexpr std::array<std::uint8_t, 3> kBlack{0, 0, 0};
constexpr std::array<std::uint8_t, 3> kRed{220, 30, 30};

}  // namespace

std::size_t RasterImage::count_red() const {
  std::size_t n = 0;
  for (const auto& p : pixels) n += p == kRed ? 1 : 0;
  return n;
}

RasterImage render_raster_image(const SpikeTensor& original,
                                const SpikeTensor& adversarial,
                                int window_begin, int window_end) {
  require_same_geometry(original.geometry(), adversarial.geometry(),
                        "render_raster");
  const Geometry& g = original.geometry();
  if (window_begin < 0 || window_end > g.timesteps ||
      window_begin >= window_end) {
    throw std::invalid_argument(
        "invalid raster window [" + std::to_string(window_begin) + ", " +
        std::to_string(window_end) + ") for " + std::to_string(g.timesteps) +
        " timesteps");
  }
  RasterImage img;
  img.width = g.width;
  img.height = g.height;
  img.pixels.assign(static_cast<std::size_t>(g.width) * g.height, kWhite);
  for (int x = 0; x < g.width; ++x) {
    for (int y = 0; y < g.height; ++y) {
      bool differs = false;
      bool any_spike = false;
      for (int k = window_begin; k < window_end && !differs; ++k) {
        for (int c = 0; c < g.channels; ++c) {
          const std::uint8_t a = original.at(c, x, y, k);
          const std::uint8_t b = adversarial.at(c, x, y, k);
          if (a != b) {
            differs = true;
            break;
          }
          any_spike = any_spike || a;
        }
      }
      img.pixels[static_cast<std::size_t>(y) * g.width + x] =
          differs ? kRed : (any_spike ? kBlack : kWhite);
    }
  }
  return img;
}

void render_raster(const SpikeTensor& original, const SpikeTensor& adversarial,
                   int window_begin, int window_end,
                   const std::filesystem::path& path) {
  const RasterImage img =
      render_raster_image(original, adversarial, window_begin, window_end);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  for (const auto& p : img.pixels) {
    out.write(reinterpret_cast<const char*>(p.data()), 3);
  }
  if (!out) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

}  // namespace spikeatk
