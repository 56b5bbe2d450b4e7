// spikeatk command line: dataset generation, SNN training, input-specific
// and universal adversarial attacks, and evaluation of stored artifacts.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "spikeatk/attack.hpp"
#include "spikeatk/checkpoint.hpp"
#include "spikeatk/dataset_io.hpp"
#include "spikeatk/events.hpp"
#include "spikeatk/raster.hpp"
#include "spikeatk/rng.hpp"
#include "spikeatk/summary.hpp"
#include "spikeatk/synthetic.hpp"
#include "spikeatk/uap.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spikeatk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGeneration = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<int> limit;
  bool force = false;
  std::optional<int> render;
};

// ---------------------------------------------------------------------------
// config handling

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) {
    throw ConfigError("config section '" + where + "' must be a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in config section '" +
                        where + "'");
    }
  }
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& err) {
    throw ConfigError(path + ": " + err.what());
  }
  check_keys(cfg, {"seed", "dataset", "train", "attack", "uap", "eval"},
             "top level");
  return cfg;
}

json section(const json& cfg, const char* name,
             std::initializer_list<const char*> allowed) {
  if (!cfg.contains(name)) return json::object();
  check_keys(cfg.at(name), allowed, name);
  return cfg.at(name);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& err) {
    throw ConfigError(std::string("config key '") + key + "': " + err.what());
  }
}

std::string require_path(const json& j, const char* key, const char* command) {
  const std::string value = get_or<std::string>(j, key, "");
  if (value.empty()) {
    throw ConfigError(std::string(command) + " needs config key '" + key +
                      "' (no default for paths)");
  }
  return value;
}

// All relative paths in the config resolve under SPIKEATK_OUTPUT_DIR when
// that variable is set.
fs::path resolve(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path;
  if (const char* base = std::getenv("SPIKEATK_OUTPUT_DIR")) {
    return fs::path(base) / path;
  }
  return path;
}

std::uint64_t pick_seed(const CliOptions& cli, const json& sect,
                        const json& top) {
  if (cli.seed) return *cli.seed;
  if (sect.contains("seed")) return sect.at("seed").get<std::uint64_t>();
  return get_or<std::uint64_t>(top, "seed", 42);
}

// ---------------------------------------------------------------------------
// shared pieces

SyntheticSpec dataset_spec(const json& d, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.classes = get_or(d, "classes", spec.classes);
  spec.geometry.channels = get_or(d, "channels", 2);
  spec.geometry.width = get_or(d, "width", 8);
  spec.geometry.height = get_or(d, "height", 8);
  spec.geometry.timesteps = get_or(d, "timesteps", 50);
  spec.motif_density = get_or(d, "motif_density", spec.motif_density);
  spec.flip_probability = get_or(d, "flip_probability", spec.flip_probability);
  spec.samples_per_class = get_or(d, "samples_per_class", spec.samples_per_class);
  spec.train_fraction = get_or(d, "train_fraction", spec.train_fraction);
  spec.seed = seed;
  return spec;
}

std::vector<LayerSpec> model_layers(const json& t, int classes) {
  const double theta = get_or(t, "theta", 1.0);
  const double lambda = get_or(t, "lambda", 0.9);
  const double alpha = get_or(t, "alpha", 0.0);
  std::vector<LayerSpec> specs;
  json hidden = t.contains("hidden") ? t.at("hidden") : json::array({json{
                    {"kind", "dense"}, {"units", 48}}});
  if (!hidden.is_array()) {
    throw ConfigError("config key 'hidden' must be an array of layer objects");
  }
  for (const auto& h : hidden) {
    check_keys(h, {"kind", "units", "out_channels", "kernel"}, "train.hidden");
    LayerSpec spec;
    const std::string kind = get_or<std::string>(h, "kind", "dense");
    if (kind == "dense") {
      spec.kind = LayerKind::dense;
      spec.units = get_or(h, "units", 48);
    } else if (kind == "conv2d") {
      spec.kind = LayerKind::conv2d;
      spec.out_channels = get_or(h, "out_channels", 4);
      spec.kernel = get_or(h, "kernel", 3);
    } else {
      throw ConfigError("unknown layer kind '" + kind + "'");
    }
    spec.threshold = theta;
    spec.decay = lambda;
    spec.surrogate_alpha = alpha;
    specs.push_back(spec);
  }
  specs.push_back(LayerSpec{.kind = LayerKind::dense, .units = classes,
                            .threshold = theta, .decay = lambda,
                            .surrogate_alpha = alpha});
  return specs;
}

const Dataset& pick_split(const DatasetDir& ds, const std::string& split) {
  if (split == "train") return ds.data.train;
  if (split == "test") return ds.data.test;
  throw ConfigError("unknown split '" + split + "' (use train or test)");
}

void require_geometry_match(const SnnModel& model, const Geometry& geom) {
  const Shape3 in{geom.channels, geom.width, geom.height};
  if (!(in == model.input_shape())) {
    throw ConfigError("checkpoint input shape " +
                      model.input_shape().describe() +
                      " does not match dataset geometry " + geom.describe());
  }
}

json loss_to_json(const LossBreakdown& l) {
  return json{{"l1", l.similarity},
              {"l2", l.winning_class},
              {"l3", l.margin},
              {"total", l.total}};
}

// ---------------------------------------------------------------------------
// commands

int cmd_gen_dataset(const json& cfg, const CliOptions& cli) {
  const json d = section(cfg, "dataset",
                         {"out_dir", "classes", "channels", "width", "height",
                          "timesteps", "motif_density", "flip_probability",
                          "samples_per_class", "train_fraction", "timestep_us",
                          "seed"});
  const SyntheticSpec spec = dataset_spec(d, pick_seed(cli, d, cfg));
  const std::uint32_t timestep_us = get_or<std::uint32_t>(d, "timestep_us", 1000);
  const fs::path out_dir = resolve(require_path(d, "out_dir", "gen-dataset"));

  const SplitDataset data = gen_synthetic(spec);
  write_dataset_dir(out_dir, data, spec.geometry, spec.classes, timestep_us,
                    cli.force);
  std::cout << "wrote " << data.train.size() + data.test.size()
            << " samples (" << data.train.size() << " train, "
            << data.test.size() << " test) to " << out_dir.string() << "\n";
  return kExitOk;
}

// epochs = 0 stores the freshly initialized model
TrainResult train_model_or_skip(SnnModel& model, const DatasetDir& ds,
                                const TrainConfig& cfg) {
  if (cfg.epochs == 0) return {};
  return train_model(model, ds.data.train, ds.data.test, cfg);
}

int cmd_train(const json& cfg, const CliOptions& cli) {
  const json t = section(cfg, "train",
                         {"dataset_dir", "checkpoint", "log", "epochs",
                          "learning_rate", "batch_size", "true_fraction",
                          "false_fraction", "hidden", "theta", "lambda",
                          "alpha", "seed"});
  const fs::path dataset_dir = resolve(require_path(t, "dataset_dir", "train"));
  const fs::path ckpt_path = resolve(require_path(t, "checkpoint", "train"));
  const std::string log_name = get_or<std::string>(t, "log", "");

  const DatasetDir ds = read_dataset_dir(dataset_dir);
  TrainConfig train_cfg;
  train_cfg.epochs = get_or(t, "epochs", train_cfg.epochs);
  train_cfg.learning_rate = get_or(t, "learning_rate", train_cfg.learning_rate);
  train_cfg.batch_size = get_or(t, "batch_size", train_cfg.batch_size);
  train_cfg.targets.true_fraction =
      get_or(t, "true_fraction", train_cfg.targets.true_fraction);
  train_cfg.targets.false_fraction =
      get_or(t, "false_fraction", train_cfg.targets.false_fraction);
  train_cfg.seed = pick_seed(cli, t, cfg);
  train_cfg.validate();

  SnnModel model = SnnModel::build(
      Shape3{ds.geometry.channels, ds.geometry.width, ds.geometry.height},
      model_layers(t, ds.classes), train_cfg.seed);

  const TrainResult result =
      train_model_or_skip(model, ds, train_cfg);

  if (!log_name.empty()) {
    std::ofstream log(resolve(log_name), std::ios::binary);
    for (const EpochStats& e : result.history) {
      log << json{{"epoch", e.epoch},
                  {"mean_loss", e.mean_loss},
                  {"train_accuracy", e.train_accuracy},
                  {"test_accuracy", e.test_accuracy}}
                 .dump()
          << "\n";
    }
  }
  save_checkpoint({model, train_cfg.targets}, ckpt_path);

  const double final_test =
      result.history.empty() ? evaluate_accuracy(model, ds.data.test)
                             : result.history.back().test_accuracy;
  const double final_train =
      result.history.empty() ? evaluate_accuracy(model, ds.data.train)
                             : result.history.back().train_accuracy;
  std::cout << "trained " << result.history.size() << " epochs; train accuracy "
            << 100.0 * final_train << "%, test accuracy "
            << 100.0 * final_test << "%\n"
            << "checkpoint written to " << ckpt_path.string() << "\n";
  return kExitOk;
}

AttackConfig attack_config(const json& a, std::uint64_t seed) {
  AttackConfig cfg;
  cfg.alpha1 = get_or(a, "alpha1", cfg.alpha1);
  cfg.alpha2 = get_or(a, "alpha2", cfg.alpha2);
  cfg.alpha3 = get_or(a, "alpha3", cfg.alpha3);
  cfg.learning_rate = get_or(a, "learning_rate", cfg.learning_rate);
  cfg.tau.initial = get_or(a, "tau_initial", cfg.tau.initial);
  cfg.tau.decay = get_or(a, "tau_decay", cfg.tau.decay);
  cfg.tau.floor = get_or(a, "tau_floor", cfg.tau.floor);
  cfg.beta = get_or(a, "beta", cfg.beta);
  cfg.r1.increment = get_or(a, "r1_increment", cfg.r1.increment);
  cfg.r1.patience = get_or(a, "r1_patience", cfg.r1.patience);
  cfg.margin = get_or(a, "margin", cfg.margin);
  cfg.max_iterations = get_or(a, "max_iterations", cfg.max_iterations);
  cfg.noise = get_or(a, "noise", cfg.noise);
  cfg.resample_noise = get_or(a, "resample_noise", cfg.resample_noise);
  cfg.early_stop = get_or(a, "early_stop", cfg.early_stop);
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

int cmd_attack(const json& cfg, const CliOptions& cli) {
  const json a = section(cfg, "attack",
                         {"dataset_dir", "checkpoint", "out_dir", "split",
                          "alpha1", "alpha2", "alpha3", "learning_rate",
                          "tau_initial", "tau_decay", "tau_floor", "beta",
                          "r1_increment", "r1_patience", "margin",
                          "max_iterations", "noise", "resample_noise",
                          "early_stop", "limit", "render", "seed"});
  const fs::path dataset_dir = resolve(require_path(a, "dataset_dir", "attack"));
  const fs::path ckpt_path = resolve(require_path(a, "checkpoint", "attack"));
  const fs::path out_dir = resolve(require_path(a, "out_dir", "attack"));

  const DatasetDir ds = read_dataset_dir(dataset_dir);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  require_geometry_match(ckpt.model, ds.geometry);

  const std::uint64_t run_seed = pick_seed(cli, a, cfg);
  const AttackConfig base_cfg = attack_config(a, run_seed);
  const std::string split = get_or<std::string>(a, "split", "test");
  int limit = cli.limit ? *cli.limit : get_or(a, "limit", 0);
  const int render = cli.render ? *cli.render : get_or(a, "render", 0);

  // only samples the clean model classifies correctly are attacked
  std::vector<const LabeledSample*> targets;
  for (const LabeledSample& s : pick_split(ds, split)) {
    const ForwardTrace t = forward(ckpt.model, s.input, false);
    if (winner(t.class_counts) == s.label) {
      targets.push_back(&s);
      if (limit > 0 && static_cast<int>(targets.size()) >= limit) break;
    }
  }

  fs::create_directories(out_dir);
  if (targets.empty()) {
    std::ofstream(out_dir / "reports.jsonl", std::ios::binary);
    std::cout << "0 samples tested\n";
    return kExitOk;
  }

  std::vector<AttackReport> reports(targets.size());
  {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= targets.size()) break;
        try {
          AttackConfig cfg_i = base_cfg;
          cfg_i.seed = mix_seed(run_seed, i);
          reports[i] = run_attack(ckpt.model, targets[i]->input, cfg_i);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true);
        }
      }
    };
    const int jobs = std::max(1, cli.jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  std::ofstream jsonl(out_dir / "reports.jsonl", std::ios::binary);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const AttackReport& r = reports[i];
    jsonl << json{{"sample", targets[i]->id},
                  {"label", targets[i]->label},
                  {"w", r.original_class},
                  {"w_adv", r.adversarial_class},
                  {"success", r.success},
                  {"perturbation_pct", r.perturbation_pct},
                  {"iterations", r.iterations},
                  {"elapsed_ms", r.elapsed_ms},
                  {"loss", loss_to_json(r.final_loss)}}
                 .dump()
          << "\n";
  }
  jsonl.close();

  const MetricsSummary summary = summarize(reports);
  {
    std::ofstream out(out_dir / "summary.json", std::ios::binary);
    out << json{{"samples_tested", summary.samples_tested},
                {"asr_pct", summary.asr_pct},
                {"perturbation_pct",
                 {{"min", summary.perturbation_min_pct},
                  {"avg", summary.perturbation_avg_pct},
                  {"max", summary.perturbation_max_pct}}},
                {"avg_iterations", summary.iterations_avg},
                {"timing_s",
                 {{"min", summary.time_min_s},
                  {"avg", summary.time_avg_s},
                  {"max", summary.time_max_s}}}}
               .dump(2)
        << "\n";
  }
  std::cout << format_table(summary);

  if (render > 0) {
    const fs::path raster_dir = out_dir / "rasters";
    fs::create_directories(raster_dir);
    int rendered = 0;
    for (std::size_t i = 0; i < reports.size() && rendered < render; ++i) {
      if (!reports[i].success) continue;
      const int steps = ds.geometry.timesteps;
      for (int k0 = 0; k0 < steps; k0 += 10) {
        const int k1 = std::min(steps, k0 + 10);
        char name[64];
        std::snprintf(name, sizeof(name), "%s_w%03d.ppm",
                      targets[i]->id.c_str(), k0);
        render_raster(targets[i]->input, reports[i].adversarial, k0, k1,
                      raster_dir / name);
      }
      ++rendered;
    }
  }
  return kExitOk;
}

int cmd_uap(const json& cfg, const CliOptions& cli) {
  const json u = section(cfg, "uap",
                         {"dataset_dir", "checkpoint", "out_dir",
                          "gradient_scale", "e_sweep", "tau", "noise",
                          "sparsity_cap_pct", "accumulate_split", "eval_split",
                          "seed"});
  const fs::path dataset_dir = resolve(require_path(u, "dataset_dir", "uap"));
  const fs::path ckpt_path = resolve(require_path(u, "checkpoint", "uap"));
  const fs::path out_dir = resolve(require_path(u, "out_dir", "uap"));

  const DatasetDir ds = read_dataset_dir(dataset_dir);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  require_geometry_match(ckpt.model, ds.geometry);

  UapConfig base;
  base.gradient_scale = get_or(u, "gradient_scale", base.gradient_scale);
  base.tau = get_or(u, "tau", base.tau);
  base.noise = get_or(u, "noise", base.noise);
  base.sparsity_cap_pct = get_or(u, "sparsity_cap_pct", base.sparsity_cap_pct);
  base.seed = pick_seed(cli, u, cfg);
  base.validate();
  std::vector<double> sweep =
      get_or(u, "e_sweep", std::vector<double>{});
  if (sweep.empty()) sweep = {base.gradient_scale};

  const Dataset& gen_split =
      pick_split(ds, get_or<std::string>(u, "accumulate_split", "train"));
  const Dataset& eval_split =
      pick_split(ds, get_or<std::string>(u, "eval_split", "test"));

  UapStats stats;
  const RealTensor global_grad = accumulate_gradients(
      ckpt.model, gen_split, ckpt.loss_params, &stats, std::max(1, cli.jobs));
  if (stats.forward_backward_pairs != gen_split.size()) {
    throw std::logic_error("gradient accumulation pass count mismatch");
  }

  std::optional<UapReport> best;
  double best_e = 0.0;
  std::string last_error = "no gradient scale candidates";
  for (double e : sweep) {
    UapConfig candidate = base;
    candidate.gradient_scale = e;
    try {
      const SpikeTensor uap = build_uap(global_grad, candidate);
      UapReport report = evaluate_uap(ckpt.model, eval_split, uap);
      if (!best || report.overall_asr_pct > best->overall_asr_pct) {
        best = std::move(report);
        best_e = e;
      }
    } catch (const UapGenerationError& err) {
      last_error = err.what();
      std::cerr << "gradient scale " << e << ": " << err.what() << "\n";
    }
  }
  if (!best) throw UapGenerationError(last_error);

  fs::create_directories(out_dir);
  save_events_csv(best->uap, out_dir / "uap.csv", ds.timestep_us);
  {
    const auto now = std::chrono::system_clock::now();
    std::ofstream sidecar(out_dir / "uap.json", std::ios::binary);
    sidecar << json{{"geometry",
                     {{"channels", ds.geometry.channels},
                      {"width", ds.geometry.width},
                      {"height", ds.geometry.height},
                      {"timesteps", ds.geometry.timesteps}}},
                    {"timestep_us", ds.timestep_us},
                    {"gradient_scale", best_e},
                    {"tau", base.tau},
                    {"noise", base.noise},
                    {"seed", base.seed},
                    {"sparsity_pct", best->sparsity_pct},
                    {"generated_at_unix_ms",
                     std::chrono::duration_cast<std::chrono::milliseconds>(
                         now.time_since_epoch())
                         .count()}}
                   .dump(2)
            << "\n";
  }
  {
    json per_class = json::array();
    for (const auto& c : best->per_class) {
      per_class.push_back({{"class", c.cls},
                           {"counted", c.counted},
                           {"fooled", c.fooled},
                           {"asr_pct", c.asr_pct}});
    }
    std::ofstream report(out_dir / "uap_report.json", std::ios::binary);
    report << json{{"overall_asr_pct", best->overall_asr_pct},
                   {"sparsity_pct", best->sparsity_pct},
                   {"counted", best->counted},
                   {"dataset_size", best->dataset_size},
                   {"generation_samples", gen_split.size()},
                   {"gradient_scale", best_e},
                   {"per_class", std::move(per_class)}}
                  .dump(2)
           << "\n";
  }

  std::cout << "UAP sparsity " << best->sparsity_pct << "% (gradient scale "
            << best_e << ")\n";
  std::cout << "class  counted  fooled  ASR\n";
  for (const auto& c : best->per_class) {
    char line[80];
    std::snprintf(line, sizeof(line), "%5d  %7d  %6d  %.2f%%\n", c.cls,
                  c.counted, c.fooled, c.asr_pct);
    std::cout << line;
  }
  char overall[80];
  std::snprintf(overall, sizeof(overall), "overall ASR %.2f%% on %zu samples\n",
                best->overall_asr_pct, best->counted);
  std::cout << overall;
  return kExitOk;
}

int cmd_eval(const json& cfg, const CliOptions& cli) {
  const json e = section(cfg, "eval",
                         {"dataset_dir", "checkpoint", "uap", "split", "out",
                          "seed"});
  const fs::path dataset_dir = resolve(require_path(e, "dataset_dir", "eval"));
  const fs::path ckpt_path = resolve(require_path(e, "checkpoint", "eval"));
  (void)cli;

  const DatasetDir ds = read_dataset_dir(dataset_dir);
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  require_geometry_match(ckpt.model, ds.geometry);
  const Dataset& split = pick_split(ds, get_or<std::string>(e, "split", "test"));

  const double accuracy = evaluate_accuracy(ckpt.model, split);
  json out_json{{"accuracy_pct", 100.0 * accuracy},
                {"samples", split.size()}};
  std::cout << "clean accuracy " << 100.0 * accuracy << "% on "
            << split.size() << " samples\n";

  const std::string uap_path = get_or<std::string>(e, "uap", "");
  if (!uap_path.empty()) {
    const fs::path uap_csv = resolve(uap_path);
    const SpikeTensor uap =
        load_events_csv(uap_csv, ds.geometry, ds.timestep_us);
    const UapReport report = evaluate_uap(ckpt.model, split, uap);
    out_json["uap"] = {{"overall_asr_pct", report.overall_asr_pct},
                       {"sparsity_pct", report.sparsity_pct},
                       {"counted", report.counted}};
    std::cout << "UAP ASR " << report.overall_asr_pct << "% on "
              << report.counted << " correctly classified samples (sparsity "
              << report.sparsity_pct << "%)\n";
  }
  const std::string out_path = get_or<std::string>(e, "out", "");
  if (!out_path.empty()) {
    std::ofstream out(resolve(out_path), std::ios::binary);
    out << out_json.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spiking-network adversarial attack toolkit"};
  app.require_subcommand(1);

  CliOptions cli;
  app.add_option("--config", cli.config_path, "JSON config file");
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      app.add_option("--seed", seed_value, "override every configured seed");
  app.add_option("--jobs", cli.jobs, "worker threads (1 = deterministic)")
      ->check(CLI::PositiveNumber);
  int limit_value = 0;
  auto* limit_opt = app.add_option("--limit", limit_value,
                                   "attack at most N samples");
  app.add_flag("--force", cli.force, "overwrite existing outputs");
  int render_value = 0;
  auto* render_opt = app.add_option(
      "--render", render_value, "render rasters for the first N successes");

  auto* gen = app.add_subcommand("gen-dataset", "write a synthetic dataset");
  auto* train = app.add_subcommand("train", "train a model on a dataset");
  auto* attack = app.add_subcommand("attack", "input-specific attack");
  auto* uap = app.add_subcommand("uap", "generate a universal patch");
  auto* eval = app.add_subcommand("eval", "evaluate stored artifacts");
  for (auto* sub : {gen, train, attack, uap, eval}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*seed_opt) cli.seed = seed_value;
  if (*limit_opt) cli.limit = limit_value;
  if (*render_opt) cli.render = render_value;

  try {
    const json cfg = load_config(cli.config_path);
    if (gen->parsed()) return cmd_gen_dataset(cfg, cli);
    if (train->parsed()) return cmd_train(cfg, cli);
    if (attack->parsed()) return cmd_attack(cfg, cli);
    if (uap->parsed()) return cmd_uap(cfg, cli);
    if (eval->parsed()) return cmd_eval(cfg, cli);
  } catch (const UapGenerationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitGeneration;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
