#ifndef SPIKEATK_EVENTS_HPP
#define SPIKEATK_EVENTS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "spikeatk/tensor.hpp"

namespace spikeatk {

// One sensor event: where, when, which polarity/channel.
struct EventRecord {
  std::uint32_t timestamp_us = 0;
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::uint8_t channel = 0;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// Events whose bin index falls beyond the tensor duration are dropped, not
// clamped; the count is reported here.
struct LoadStats {
  std::size_t dropped_out_of_duration = 0;
};

// Bins events onto the tensor grid: timestep index = timestamp / timestep_us,
// multiple events in one cell/bin saturate to a single 1. Coordinates outside
// the geometry are an error.
SpikeTensor bin_events(const std::vector<EventRecord>& events,
                       const Geometry& geom, std::uint32_t timestep_us,
                       LoadStats* stats = nullptr);

// Text format: one event per line, `timestamp_us,x,y,channel`, LF, optional
// header line.
std::vector<EventRecord> read_events_csv(const std::filesystem::path& path);
SpikeTensor load_events_csv(const std::filesystem::path& path,
                            const Geometry& geom, std::uint32_t timestep_us,
                            LoadStats* stats = nullptr);
// One line per 1-cell with timestamp k*timestep_us; load(save(t)) == t.
void save_events_csv(const SpikeTensor& tensor,
                     const std::filesystem::path& path,
                     std::uint32_t timestep_us);

// NMNIST AER binary record: 5 bytes per event.
//   byte0          x
//   byte1          y
//   byte2 bit 7    polarity
//   byte2 bits 6..0, byte3, byte4   23-bit big-endian timestamp in us
EventRecord decode_nmnist_record(const std::array<std::uint8_t, 5>& bytes);
std::array<std::uint8_t, 5> encode_nmnist_record(const EventRecord& ev);

std::vector<EventRecord> read_events_nmnist(const std::filesystem::path& path);
void write_events_nmnist(const std::filesystem::path& path,
                         const std::vector<EventRecord>& events);
SpikeTensor load_events_nmnist(const std::filesystem::path& path,
                               const Geometry& geom,
                               std::uint32_t timestep_us,
                               LoadStats* stats = nullptr);

}  // namespace spikeatk

#endif  // SPIKEATK_EVENTS_HPP
