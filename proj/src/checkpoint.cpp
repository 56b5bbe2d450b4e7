#include "spikeatk/checkpoint.hpp"

#include <bit>
#include <fstream>

#include "json.hpp"

namespace spikeatk {

namespace {

constexpr const char* kMagic = "SPIKEATK-CKPT";
constexpr int kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "weight blob is little-endian; add byte swapping on this host");

nlohmann::json layer_to_json(const Layer& ly) {
  nlohmann::json j;
  j["kind"] = ly.spec.kind == LayerKind::dense ? "dense" : "conv2d";
  if (ly.spec.kind == LayerKind::dense) {
    j["units"] = ly.spec.units;
  } else {
    j["out_channels"] = ly.spec.out_channels;
    j["kernel"] = ly.spec.kernel;
  }
  j["theta"] = ly.spec.threshold;
  j["lambda"] = ly.spec.decay;
  j["alpha"] = ly.spec.surrogate_alpha;
  return j;
}

LayerSpec layer_from_json(const nlohmann::json& j) {
  LayerSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dense") {
    spec.kind = LayerKind::dense;
    spec.units = j.at("units").get<int>();
  } else if (kind == "conv2d") {
    spec.kind = LayerKind::conv2d;
    spec.out_channels = j.at("out_channels").get<int>();
    spec.kernel = j.at("kernel").get<int>();
  } else {
    throw std::runtime_error("unknown layer kind '" + kind + "'");
  }
  spec.threshold = j.at("theta").get<double>();
  spec.decay = j.at("lambda").get<double>();
  spec.surrogate_alpha = j.at("alpha").get<double>();
  return spec;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path) {
  ckpt.model.validate();
  nlohmann::json header;
  header["version"] = kVersion;
  const Shape3& in = ckpt.model.input_shape();
  header["input_shape"] = {in.channels, in.width, in.height};
  header["seed"] = ckpt.model.init_seed();
  header["loss_targets"] = {{"true_fraction", ckpt.loss_params.true_fraction},
                            {"false_fraction", ckpt.loss_params.false_fraction}};
  nlohmann::json layers = nlohmann::json::array();
  std::size_t doubles = 0;
  for (const Layer& ly : ckpt.model.layers()) {
    layers.push_back(layer_to_json(ly));
    doubles += ly.weights.size() + ly.bias.size();
  }
  header["layers"] = std::move(layers);
  header["weight_doubles"] = doubles;

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << kMagic << "\n" << header.dump() << "\n";
  for (const Layer& ly : ckpt.model.layers()) {
    out.write(reinterpret_cast<const char*>(ly.weights.data()),
              static_cast<std::streamsize>(ly.weights.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(ly.bias.data()),
              static_cast<std::streamsize>(ly.bias.size() * sizeof(double)));
  }
  if (!out) {
    throw std::runtime_error("write failure on " + path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open checkpoint " + path.string());
  }
  std::string magic;
  if (!std::getline(in, magic) || magic != kMagic) {
    throw std::runtime_error(path.string() +
                             ": not a model checkpoint (bad magic)");
  }
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error(path.string() + ": missing checkpoint header");
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::runtime_error(path.string() + ": malformed header: " +
                             err.what());
  }
  const int version = header.at("version").get<int>();
  if (version != kVersion) {
    throw std::runtime_error(path.string() + ": unsupported version " +
                             std::to_string(version));
  }

  const auto shape = header.at("input_shape");
  Shape3 input{shape.at(0).get<int>(), shape.at(1).get<int>(),
               shape.at(2).get<int>()};
  std::vector<LayerSpec> specs;
  for (const auto& j : header.at("layers")) {
    specs.push_back(layer_from_json(j));
  }
  Checkpoint ckpt;
  ckpt.model = SnnModel::build(input, specs,
                               header.at("seed").get<std::uint64_t>());
  ckpt.loss_params.true_fraction =
      header.at("loss_targets").at("true_fraction").get<double>();
  ckpt.loss_params.false_fraction =
      header.at("loss_targets").at("false_fraction").get<double>();

  const std::size_t doubles = header.at("weight_doubles").get<std::size_t>();
  if (doubles != ckpt.model.param_count()) {
    throw std::runtime_error(path.string() +
                             ": weight blob length disagrees with layer specs");
  }
  std::vector<double> blob(doubles);
  in.read(reinterpret_cast<char*>(blob.data()),
          static_cast<std::streamsize>(doubles * sizeof(double)));
  if (in.gcount() !=
      static_cast<std::streamsize>(doubles * sizeof(double))) {
    throw std::runtime_error(path.string() + ": truncated weight blob");
  }
  ckpt.model.set_params(blob);
  ckpt.model.validate();
  return ckpt;
}

}  // namespace spikeatk
