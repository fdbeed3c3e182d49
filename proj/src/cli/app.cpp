#include "pedfuse/cli/app.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"
#include "pedfuse/common/rng.hpp"
#include "pedfuse/data/corpus.hpp"
#include "pedfuse/data/split.hpp"
#include "pedfuse/eval/metrics.hpp"
#include "pedfuse/eval/render.hpp"
#include "pedfuse/model/checkpoint.hpp"
#include "pedfuse/model/fusion.hpp"
#include "pedfuse/synth/corpus.hpp"
#include "pedfuse/train/config.hpp"
#include "pedfuse/train/loss.hpp"
#include "pedfuse/train/trainer.hpp"

namespace pedfuse::cli {

namespace fs = std::filesystem;

namespace {

// Derived-seed salts 0-4 initialize parameter blocks, 5 drives the epoch
// shuffle, 6 the gradient-check probe; the dataset split gets its own lane.
constexpr std::uint64_t kSplitSalt = 7;

constexpr double kGradcheckBound = 1e-4;

/// Results land in a staging directory and move to --out in one rename, so a
/// failed run leaves nothing at the final path.
class StagedDir {
 public:
  explicit StagedDir(fs::path final_path)
      : final_(std::move(final_path)), tmp_(final_.string() + ".staging") {
    if (fs::exists(final_)) {
      throw IoError("output path already exists: " + final_.string() + " (pick a fresh --out)");
    }
    std::error_code ec;
    fs::remove_all(tmp_, ec);
    fs::create_directories(tmp_, ec);
    if (ec || !fs::is_directory(tmp_)) {
      throw IoError("could not create staging directory " + tmp_.string());
    }
  }
  StagedDir(const StagedDir&) = delete;
  StagedDir& operator=(const StagedDir&) = delete;
  ~StagedDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(tmp_, ec);
    }
  }

  const fs::path& path() const { return tmp_; }

  void commit() {
    std::error_code ec;
    fs::rename(tmp_, final_, ec);
    if (ec) {
      throw IoError("could not move results to " + final_.string() + ": " + ec.message());
    }
    committed_ = true;
  }

 private:
  fs::path final_;
  fs::path tmp_;
  bool committed_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed while writing " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("could not open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

/// A human-readable name for a directory: its last path component.
std::string dir_label(const fs::path& dir) {
  fs::path p = dir.lexically_normal();
  std::string name = p.filename().string();
  if (name.empty() || name == ".") name = p.parent_path().filename().string();
  return name.empty() ? p.string() : name;
}

/// Reruns a pipeline stage with the stage name prefixed onto any error, so a
/// multi-stage command reports where it failed without changing the class.
template <class Fn>
auto stage(const std::string& label, Fn&& fn) {
  try {
    return fn();
  } catch (const DataError& e) {
    throw DataError(label + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(label + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(label + ": " + e.what());
  }
}

// ---- generate ----

struct GenerateArgs {
  std::string kinds = "all";
  std::size_t n = 50;
  std::uint64_t seed = 1;
  double noise = 0.03;
  double duration = 6.0;
  std::string out;
};

std::string serialize_generate_config(const GenerateArgs& a) {
  std::string text;
  text += "kinds=" + a.kinds + "\n";
  text += "n=" + std::to_string(a.n) + "\n";
  text += "seed=" + std::to_string(a.seed) + "\n";
  text += "noise_sigma=" + numio::format_double(a.noise) + "\n";
  text += "duration=" + numio::format_double(a.duration) + "\n";
  return text;
}

int run_generate(const GenerateArgs& a) {
  synth::CorpusConfig config;
  config.n_per_kind = a.n;
  config.base_seed = a.seed;
  config.noise_sigma = a.noise;
  config.duration_s = a.duration;
  std::vector<synth::ScenarioSpec> specs = synth::plan_corpus(config);
  if (a.kinds != "all") {
    std::erase_if(specs, [&](const synth::ScenarioSpec& s) {
      if (a.kinds == "interaction") {
        return s.kind == synth::ScenarioKind::independent_far;
      }
      return to_string(s.kind) != a.kinds;
    });
  }

  StagedDir staged(a.out);
  synth::generate_corpus(staged.path(), specs);
  write_text(staged.path() / "generate.cfg", serialize_generate_config(a));
  staged.commit();
  std::cout << "wrote " << specs.size() << " scenarios to " << a.out << std::endl;
  return 0;
}

// ---- train / experiment configuration ----

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string config_file;
  std::string method = "baseline";
  std::uint64_t seed = 1;
  double lr = 1e-3;
  std::size_t batch = 64;
  std::size_t epochs = 200;
  std::size_t patience = 10;
  double clip = 5.0;
  std::size_t hidden = 64;
  std::size_t decoder_hidden = 128;
};

void add_hyper_flags(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--config", a.config_file,
                  "key=value config file; explicit flags override its entries")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", a.seed, "run seed: initialization, shuffling and data split");
  cmd->add_option("--lr", a.lr, "Adam learning rate (step size per update)");
  cmd->add_option("--batch", a.batch, "samples per gradient step");
  cmd->add_option("--epochs", a.epochs, "maximum training epochs");
  cmd->add_option("--patience", a.patience,
                  "non-improving validation epochs tolerated before stopping");
  cmd->add_option("--clip", a.clip, "global gradient norm cap (0 disables)");
  cmd->add_option("--hidden", a.hidden, "encoder hidden width (units per stream)");
  cmd->add_option("--decoder-hidden", a.decoder_hidden, "decoder hidden width (units)");
}

bool flag_given(const CLI::App* cmd, const std::string& name) {
  const CLI::Option* opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

/// Flags beat the config file, the config file beats built-in defaults.
train::TrainConfig resolve_train_config(const CLI::App* cmd, const TrainArgs& a) {
  train::TrainConfig cfg;
  if (flag_given(cmd, "--config")) cfg = train::load_config(a.config_file);
  if (flag_given(cmd, "--method")) cfg.cues = model::cues_for_method(a.method);
  if (flag_given(cmd, "--seed")) cfg.seed = a.seed;
  if (flag_given(cmd, "--lr")) cfg.learning_rate = a.lr;
  if (flag_given(cmd, "--batch")) cfg.batch_size = a.batch;
  if (flag_given(cmd, "--epochs")) cfg.max_epochs = a.epochs;
  if (flag_given(cmd, "--patience")) cfg.patience = a.patience;
  if (flag_given(cmd, "--clip")) cfg.grad_clip_norm = a.clip;
  if (flag_given(cmd, "--hidden")) {
    cfg.dims.ped_hidden = cfg.dims.veh_hidden = cfg.dims.head_hidden = a.hidden;
  }
  if (flag_given(cmd, "--decoder-hidden")) cfg.dims.decoder_hidden = a.decoder_hidden;
  train::validate(cfg);
  return cfg;
}

data::DatasetSplit load_and_split(const std::string& corpus, std::uint64_t seed) {
  const auto scenarios =
      stage("loading corpus", [&] { return data::load_corpus(corpus); });
  const auto groups =
      stage("extracting samples", [&] { return data::build_sample_groups(scenarios); });
  return stage("splitting dataset", [&] {
    return data::split_dataset(groups, data::SplitRatios{}, rng::derive_seed(seed, kSplitSalt));
  });
}

void write_train_outputs(const fs::path& dir, const train::TrainConfig& cfg,
                         const train::TrainResult& result,
                         const std::vector<data::GroupAssignment>& manifest) {
  model::save_checkpoint(dir / "checkpoint.bin", result.parameters);
  train::save_config(cfg, dir / "config.cfg");
  write_text(dir / "history.txt", train::serialize_history(result.history));
  write_text(dir / "split_manifest.txt", data::serialize_manifest(manifest));
}

std::string train_summary(const train::TrainResult& result) {
  const train::TrainHistory& h = result.history;
  return "best epoch " + std::to_string(h.best_epoch) + " of " + std::to_string(h.epochs.size()) +
         ", validation loss " +
         numio::format_double(h.epochs[h.best_epoch].validation_loss);
}

// ---- train ----

int run_train(const CLI::App* cmd, const TrainArgs& a) {
  const train::TrainConfig cfg = resolve_train_config(cmd, a);
  StagedDir staged(a.out);
  const data::DatasetSplit split = load_and_split(a.corpus, cfg.seed);
  const train::TrainResult result =
      stage("training " + model::method_name(cfg.cues), [&] { return train::train(split, cfg); });
  write_train_outputs(staged.path(), cfg, result, split.manifest);
  staged.commit();
  std::cout << model::method_name(cfg.cues) << ": " << train_summary(result) << std::endl;
  return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string corpus;
  std::string baseline;
  std::string method1;
  std::string method2;
  std::string out;
};

eval::MethodArtifacts load_artifacts(const std::string& dir) {
  return stage("loading checkpoint " + dir, [&] {
    eval::MethodArtifacts a;
    a.params = model::load_checkpoint(fs::path(dir) / "checkpoint.bin");
    a.manifest = data::parse_manifest(read_text(fs::path(dir) / "split_manifest.txt"));
    a.checkpoint_id = dir_label(dir);
    return a;
  });
}

void write_report_files(const fs::path& dir, const eval::MetricsReport& report) {
  write_text(dir / "report.txt", eval::render_report_text(report));
  write_text(dir / "report.tsv", eval::render_report_tsv(report));
  write_text(dir / "horizon.tsv", eval::render_horizon_tsv(report));
}

int run_evaluate(const EvaluateArgs& a) {
  const eval::MethodArtifacts baseline = load_artifacts(a.baseline);
  const eval::MethodArtifacts method1 = load_artifacts(a.method1);
  const eval::MethodArtifacts method2 = load_artifacts(a.method2);

  const auto scenarios = stage("loading corpus", [&] { return data::load_corpus(a.corpus); });
  const auto groups =
      stage("extracting samples", [&] { return data::build_sample_groups(scenarios); });
  const data::DatasetSplit split = stage("applying split manifest", [&] {
    return data::apply_manifest(groups, baseline.manifest);
  });

  StagedDir staged(a.out);
  const eval::MetricsReport report = stage("evaluating", [&] {
    return eval::compare_methods(split.test, baseline, method1, method2, dir_label(a.corpus));
  });
  write_report_files(staged.path(), report);
  write_text(staged.path() / "evaluate.cfg", "corpus=" + a.corpus + "\nbaseline=" + a.baseline +
                                                 "\nmethod1=" + a.method1 +
                                                 "\nmethod2=" + a.method2 + "\n");
  staged.commit();
  std::cout << eval::render_report_text(report);
  return 0;
}

// ---- gradcheck ----

struct GradcheckArgs {
  std::size_t hidden = 8;
  std::uint64_t seed = 1;
};

int run_gradcheck(const GradcheckArgs& a) {
  const model::ModelDims dims{a.hidden, a.hidden, a.hidden, 2 * a.hidden};
  double worst = 0.0;
  for (const model::CueConfig cues : {model::kBaseline, model::kMethod1, model::kMethod2}) {
    const double err = train::model_gradient_check(dims, cues, a.seed);
    std::cout << model::method_name(cues) << ": max relative error "
              << numio::format_double(err) << std::endl;
    worst = std::max(worst, err);
  }
  const bool ok = worst < kGradcheckBound;
  std::cout << "max relative error " << numio::format_double(worst) << (ok ? " < " : " >= ")
            << numio::format_double(kGradcheckBound) << (ok ? "" : "  FAIL") << std::endl;
  if (!ok) {
    std::cerr << "error: analytic gradients disagree with finite differences" << std::endl;
    return 4;
  }
  return 0;
}

// ---- plot ----

struct PlotArgs {
  std::string corpus;
  std::size_t index = 0;
  std::string map_file;
  std::string baseline;
  std::string method1;
  std::string method2;
  std::string out;
};

int run_plot(const PlotArgs& a) {
  const auto scenarios = stage("loading corpus", [&] { return data::load_corpus(a.corpus); });
  const auto groups =
      stage("extracting samples", [&] { return data::build_sample_groups(scenarios); });
  std::size_t total = 0;
  for (const data::SampleGroup& g : groups) total += g.samples.size();
  if (a.index >= total) {
    throw std::invalid_argument("sample index " + std::to_string(a.index) +
                                " out of range: the corpus yields " + std::to_string(total) +
                                " samples");
  }
  std::size_t remaining = a.index;
  const data::SampleGroup* group = &groups.front();
  for (const data::SampleGroup& g : groups) {
    if (remaining < g.samples.size()) {
      group = &g;
      break;
    }
    remaining -= g.samples.size();
  }
  const data::TrajectorySample& sample = group->samples[remaining];

  std::vector<eval::LabeledForecast> forecasts;
  const std::pair<const char*, const std::string*> sources[] = {
      {"baseline", &a.baseline}, {"method1", &a.method1}, {"fused", &a.method2}};
  for (const auto& [label, dir] : sources) {
    if (dir->empty()) continue;
    const model::ModelParameters params = stage("loading checkpoint " + *dir, [&] {
      return model::load_checkpoint(fs::path(*dir) / "checkpoint.bin");
    });
    forecasts.push_back({label, model::predict(sample, params)});
  }

  eval::BevMap map;
  if (!a.map_file.empty()) map = eval::load_map(a.map_file);

  // Single-file staging: render beside the target, then rename over it.
  const fs::path tmp = fs::path(a.out).string() + ".staging";
  try {
    eval::render_bev(sample, forecasts, map, tmp);
    fs::rename(tmp, a.out);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
  std::cout << "wrote " << a.out << " (track " << group->track_id << ", phase " << group->phase
            << ", window " << remaining << ")" << std::endl;
  return 0;
}

// ---- experiment ----

struct ExperimentArgs {
  TrainArgs base;
};

int run_experiment(const CLI::App* cmd, const ExperimentArgs& a) {
  const train::TrainConfig base_cfg = resolve_train_config(cmd, a.base);
  StagedDir staged(a.base.out);
  const data::DatasetSplit split = load_and_split(a.base.corpus, base_cfg.seed);
  std::cout << "split: " << split.train.size() << " train / " << split.validation.size()
            << " validation / " << split.test.size() << " test samples" << std::endl;

  std::vector<eval::MethodArtifacts> artifacts;
  for (const model::CueConfig cues : {model::kBaseline, model::kMethod1, model::kMethod2}) {
    const std::string name = model::method_name(cues);
    train::TrainConfig cfg = base_cfg;
    cfg.cues = cues;
    const train::TrainResult result =
        stage("training " + name, [&] { return train::train(split, cfg); });
    std::cout << name << ": " << train_summary(result) << std::endl;
    fs::create_directories(staged.path() / name);
    write_train_outputs(staged.path() / name, cfg, result, split.manifest);
    artifacts.push_back({std::move(result).parameters, split.manifest, name});
  }

  const eval::MetricsReport report = stage("evaluating", [&] {
    return eval::compare_methods(split.test, artifacts[0], artifacts[1], artifacts[2],
                                 dir_label(a.base.corpus));
  });
  write_report_files(staged.path(), report);
  write_text(staged.path() / "split_manifest.txt", data::serialize_manifest(split.manifest));
  staged.commit();
  std::cout << eval::render_report_text(report);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"pedestrian trajectory forecasting from fused vehicle and gaze cues"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "render a synthetic track corpus");
  gen->add_option("--kinds", gen_args.kinds,
                  "scenario mix: all, interaction, or one kind name")
      ->check(CLI::IsMember({"all", "interaction", "vehicle_yields", "pedestrian_halts",
                             "independent_far"}));
  gen->add_option("--n", gen_args.n, "scenarios per kind before filtering");
  gen->add_option("--seed", gen_args.seed, "corpus seed");
  gen->add_option("--noise", gen_args.noise, "position noise sigma (meters)");
  gen->add_option("--duration", gen_args.duration, "track length (seconds)");
  gen->add_option("--out", gen_args.out, "output directory, created atomically")->required();

  TrainArgs train_args;
  CLI::App* tr = app.add_subcommand("train", "train one cue configuration on a corpus");
  tr->add_option("--corpus", train_args.corpus, "track corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  tr->add_option("--method", train_args.method,
                 "cue configuration: baseline, method1, method2 or head_only")
      ->check(CLI::IsMember({"baseline", "method1", "method2", "head_only"}));
  add_hyper_flags(tr, train_args);
  tr->add_option("--out", train_args.out, "output directory, created atomically")->required();

  EvaluateArgs eval_args;
  CLI::App* ev = app.add_subcommand(
      "evaluate", "score three trained checkpoints on their shared held-out test split");
  ev->add_option("--corpus", eval_args.corpus, "track corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--baseline", eval_args.baseline, "baseline training output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--method1", eval_args.method1, "method1 training output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--method2", eval_args.method2, "method2 training output directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  ev->add_option("--out", eval_args.out, "output directory, created atomically")->required();

  GradcheckArgs gc_args;
  CLI::App* gc = app.add_subcommand(
      "gradcheck", "verify analytic gradients against central finite differences");
  gc->add_option("--hidden", gc_args.hidden, "encoder hidden width (units); decoder uses twice");
  gc->add_option("--seed", gc_args.seed, "probe seed");

  PlotArgs plot_args;
  CLI::App* pl = app.add_subcommand("plot", "render one sample as a bird's-eye SVG");
  pl->add_option("--corpus", plot_args.corpus, "track corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  pl->add_option("--index", plot_args.index, "window index into the corpus sample stream");
  pl->add_option("--map", plot_args.map_file, "street/sidewalk map file (world meters)")
      ->check(CLI::ExistingFile);
  pl->add_option("--baseline", plot_args.baseline, "baseline training output directory")
      ->check(CLI::ExistingDirectory);
  pl->add_option("--method1", plot_args.method1, "method1 training output directory")
      ->check(CLI::ExistingDirectory);
  pl->add_option("--method2", plot_args.method2, "method2 training output directory")
      ->check(CLI::ExistingDirectory);
  pl->add_option("--out", plot_args.out, "output SVG path (overwritten)")->required();

  ExperimentArgs exp_args;
  CLI::App* ex = app.add_subcommand(
      "experiment", "train baseline, method1 and method2 with a shared seed and report RMSE");
  ex->add_option("--corpus", exp_args.base.corpus, "track corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_hyper_flags(ex, exp_args.base);
  ex->add_option("--out", exp_args.base.out, "output directory, created atomically")->required();

  int code = 0;
  gen->callback([&] { code = run_generate(gen_args); });
  tr->callback([&] { code = run_train(tr, train_args); });
  ev->callback([&] { code = run_evaluate(eval_args); });
  gc->callback([&] { code = run_gradcheck(gc_args); });
  pl->callback([&] { code = run_plot(plot_args); });
  ex->callback([&] { code = run_experiment(ex, exp_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int parse_code = app.exit(e);
    return parse_code == 0 ? 0 : 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 4;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 5;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
  return code;
}

}  // namespace pedfuse::cli
