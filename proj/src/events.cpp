#include "spikeatk/events.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spikeatk {

namespace {

constexpr std::uint32_t kNmnistTimestampMax = (1u << 23) - 1;
constexpr int kNmnistSensorSize = 34;

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                           what);
}

bool parse_u32_field(std::string_view field, std::uint32_t& out) {
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

SpikeTensor bin_events(const std::vector<EventRecord>& events,
                       const Geometry& geom, std::uint32_t timestep_us,
                       LoadStats* stats) {
  if (timestep_us == 0) {
    throw std::invalid_argument("timestep_us must be positive");
  }
  SpikeTensor tensor(geom);
  std::size_t dropped = 0;
  for (const EventRecord& ev : events) {
    if (ev.channel >= geom.channels || ev.x >= geom.width ||
        ev.y >= geom.height) {
      throw std::runtime_error(
          "event coordinates (c=" + std::to_string(int(ev.channel)) + ",x=" +
          std::to_string(ev.x) + ",y=" + std::to_string(ev.y) +
          ") out of range for geometry " + geom.describe());
    }
    const std::uint32_t k = ev.timestamp_us / timestep_us;
    if (k >= static_cast<std::uint32_t>(geom.timesteps)) {
      ++dropped;
      continue;
    }
    tensor.set(ev.channel, ev.x, ev.y, static_cast<int>(k), true);
  }
  if (stats) stats->dropped_out_of_duration = dropped;
  if (dropped > 0 && !stats) {
    std::cerr << "warning: dropped " << dropped
              << " events beyond tensor duration\n";
  }
  return tensor;
}

std::vector<EventRecord> read_events_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open event file " + path.string());
  }
  std::vector<EventRecord> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::uint32_t fields[4];
    std::size_t start = 0;
    bool ok = true;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = line.find(',', start);
      const bool last = f == 3;
      if (last != (comma == std::string::npos)) {
        ok = false;
        break;
      }
      const std::string_view field =
          std::string_view(line).substr(start, last ? std::string::npos
                                                    : comma - start);
      if (!parse_u32_field(field, fields[f])) {
        ok = false;
        break;
      }
      start = comma + 1;
    }
    if (!ok) {
      // A header line is tolerated at the top of the file.
      if (line_no == 1 && line.find_first_not_of("0123456789,") !=
                              std::string::npos) {
        continue;
      }
      fail_line(path, line_no,
                "malformed event line (expected timestamp_us,x,y,channel): '" +
                    line + "'");
    }
    if (fields[1] > 0xffff || fields[2] > 0xffff || fields[3] > 0xff) {
      fail_line(path, line_no, "field value out of representable range");
    }
    events.push_back(EventRecord{fields[0],
                                 static_cast<std::uint16_t>(fields[1]),
                                 static_cast<std::uint16_t>(fields[2]),
                                 static_cast<std::uint8_t>(fields[3])});
  }
  return events;
}

SpikeTensor load_events_csv(const std::filesystem::path& path,
                            const Geometry& geom, std::uint32_t timestep_us,
                            LoadStats* stats) {
  return bin_events(read_events_csv(path), geom, timestep_us, stats);
}

void save_events_csv(const SpikeTensor& tensor,
                     const std::filesystem::path& path,
                     std::uint32_t timestep_us) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  const Geometry& g = tensor.geometry();
  for (int k = 0; k < g.timesteps; ++k) {
    for (int c = 0; c < g.channels; ++c) {
      for (int x = 0; x < g.width; ++x) {
        for (int y = 0; y < g.height; ++y) {
          if (tensor.at(c, x, y, k)) {
            out << static_cast<std::uint64_t>(k) * timestep_us << ',' << x
                << ',' << y << ',' << c << '\n';
          }
        }
      }
    }
  }
  if (!out) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

EventRecord decode_nmnist_record(const std::array<std::uint8_t, 5>& b) {
  EventRecord ev;
  ev.x = b[0];
  ev.y = b[1];
  ev.channel = (b[2] >> 7) & 1;
  ev.timestamp_us = (static_cast<std::uint32_t>(b[2] & 0x7f) << 16) |
                    (static_cast<std::uint32_t>(b[3]) << 8) |
                    static_cast<std::uint32_t>(b[4]);
  return ev;
}

std::array<std::uint8_t, 5> encode_nmnist_record(const EventRecord& ev) {
  if (ev.x > 0xff || ev.y > 0xff) {
    throw std::invalid_argument("NMNIST record coordinates must fit one byte");
  }
  if (ev.channel > 1) {
    throw std::invalid_argument("NMNIST polarity must be 0 or 1");
  }
  if (ev.timestamp_us > kNmnistTimestampMax) {
    throw std::invalid_argument("NMNIST timestamp " +
                                std::to_string(ev.timestamp_us) +
                                " exceeds 23-bit range");
  }
  return {static_cast<std::uint8_t>(ev.x), static_cast<std::uint8_t>(ev.y),
          static_cast<std::uint8_t>((ev.channel << 7) |
                                    ((ev.timestamp_us >> 16) & 0x7f)),
          static_cast<std::uint8_t>((ev.timestamp_us >> 8) & 0xff),
          static_cast<std::uint8_t>(ev.timestamp_us & 0xff)};
}

std::vector<EventRecord> read_events_nmnist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open event file " + path.string());
  }
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() % 5 != 0) {
    throw std::runtime_error(path.string() + ": file length " +
                             std::to_string(bytes.size()) +
                             " is not a multiple of 5");
  }
  std::vector<EventRecord> events;
  events.reserve(bytes.size() / 5);
  for (std::size_t i = 0; i < bytes.size(); i += 5) {
    std::array<std::uint8_t, 5> rec;
    for (int j = 0; j < 5; ++j) rec[j] = static_cast<std::uint8_t>(bytes[i + j]);
    EventRecord ev = decode_nmnist_record(rec);
    if (ev.x >= kNmnistSensorSize || ev.y >= kNmnistSensorSize) {
      throw std::runtime_error(path.string() + ": event coordinate (" +
                               std::to_string(ev.x) + "," +
                               std::to_string(ev.y) + ") outside 34x34 sensor");
    }
    events.push_back(ev);
  }
  return events;
}

void write_events_nmnist(const std::filesystem::path& path,
                         const std::vector<EventRecord>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (const EventRecord& ev : events) {
    const auto rec = encode_nmnist_record(ev);
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
  if (!out) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

SpikeTensor load_events_nmnist(const std::filesystem::path& path,
                               const Geometry& geom,
                               std::uint32_t timestep_us, LoadStats* stats) {
  return bin_events(read_events_nmnist(path), geom, timestep_us, stats);
}

}  // namespace spikeatk
