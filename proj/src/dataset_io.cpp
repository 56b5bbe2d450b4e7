#include "spikeatk/dataset_io.hpp"

#include <fstream>

#include "json.hpp"
#include "spikeatk/events.hpp"

namespace spikeatk {

namespace fs = std::filesystem;

void write_dataset_dir(const fs::path& dir, const SplitDataset& data,
                       const Geometry& geometry, int classes,
                       std::uint32_t timestep_us, bool force) {
  if (fs::exists(dir)) {
    if (!force) {
      throw std::runtime_error("output directory " + dir.string() +
                               " already exists (use --force to overwrite)");
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);

  nlohmann::json manifest;
  manifest["geometry"] = {{"channels", geometry.channels},
                          {"width", geometry.width},
                          {"height", geometry.height},
                          {"timesteps", geometry.timesteps}};
  manifest["timestep_us"] = timestep_us;
  manifest["classes"] = classes;
  nlohmann::json samples = nlohmann::json::array();
  auto emit = [&](const Dataset& split, const char* name) {
    for (const LabeledSample& s : split) {
      const std::string file = s.id + ".csv";
      save_events_csv(s.input, dir / file, timestep_us);
      samples.push_back({{"id", s.id},
                         {"class", s.label},
                         {"split", name},
                         {"file", file}});
    }
  };
  emit(data.train, "train");
  emit(data.test, "test");
  manifest["samples"] = std::move(samples);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest in " + dir.string());
  }
  out << manifest.dump(2) << "\n";
}

DatasetDir read_dataset_dir(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("missing dataset manifest " +
                             manifest_path.string());
  }
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::parse_error& err) {
    throw std::runtime_error(manifest_path.string() + ": " + err.what());
  }

  DatasetDir out;
  const auto& g = manifest.at("geometry");
  out.geometry = Geometry{g.at("channels").get<int>(), g.at("width").get<int>(),
                          g.at("height").get<int>(),
                          g.at("timesteps").get<int>()};
  out.timestep_us = manifest.at("timestep_us").get<std::uint32_t>();
  out.classes = manifest.at("classes").get<int>();

  for (const auto& entry : manifest.at("samples")) {
    LabeledSample sample;
    sample.id = entry.at("id").get<std::string>();
    sample.label = entry.at("class").get<int>();
    if (sample.label < 0 || sample.label >= out.classes) {
      throw std::runtime_error("sample '" + sample.id +
                               "' has out-of-range class " +
                               std::to_string(sample.label));
    }
    sample.input = load_events_csv(
        dir / entry.at("file").get<std::string>(), out.geometry,
        out.timestep_us);
    const std::string split = entry.at("split").get<std::string>();
    if (split == "train") {
      out.data.train.push_back(std::move(sample));
    } else if (split == "test") {
      out.data.test.push_back(std::move(sample));
    } else {
      throw std::runtime_error("sample '" + sample.id +
                               "' has unknown split '" + split + "'");
    }
  }
  return out;
}

}  // namespace spikeatk
