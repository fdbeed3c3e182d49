#include "pedfuse/synth/corpus.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"
#include "pedfuse/common/rng.hpp"

namespace pedfuse::synth {

namespace {

std::string scenario_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%04zu", index);
  return buf;
}

// One scenario's randomized parameters. The pre-onset pedestrian behavior is
// drawn from the same ranges for both interacting kinds, so the pedestrian
// stream alone cannot tell them apart before the speed change; the vehicle
// stream (braking vs. not) and the gaze shift carry the early evidence.
ScenarioSpec plan_scenario(ScenarioKind kind, std::uint64_t param_seed,
                           std::uint64_t noise_seed, const CorpusConfig& config) {
  rng::Engine eng(param_seed);
  ScenarioSpec spec;
  spec.kind = kind;
  spec.seed = noise_seed;
  spec.noise_sigma = config.noise_sigma;
  spec.duration_s = config.duration_s;
  spec.ped_speed = eng.uniform(1.1, 1.7);
  spec.veh_speed = eng.uniform(6.0, 10.0);
  spec.ped_start.x = 0.0;
  spec.veh_start.y = 0.0;

  // The vehicle reaches the crossing point x = 0 after onset_tta more seconds
  // when onset fires; onset itself leaves room for a full 1 s history window.
  spec.onset_time_s = eng.uniform(1.2, 2.2);
  const double onset_tta = eng.uniform(2.4, 3.5);
  spec.veh_start.x = -spec.veh_speed * (spec.onset_time_s + onset_tta);
  const double t_react = spec.onset_time_s + kReactionDelayS;

  switch (kind) {
    case ScenarioKind::vehicle_yields: {
      spec.decel = eng.uniform(1.6, 2.4);
      // Pedestrian reaches the lane edge shortly after reacting, then crosses.
      const double gap = eng.uniform(0.3, 0.8);
      spec.ped_start.y = -(kLaneHalfWidthM + gap) - spec.ped_speed * t_react;
      break;
    }
    case ScenarioKind::pedestrian_halts: {
      spec.decel = eng.uniform(0.6, 1.0);
      // Start position derived from the braking distance, so the stop always
      // lands a margin short of the lane edge.
      const double margin = eng.uniform(0.15, 0.5);
      const double brake_dist = spec.ped_speed * spec.ped_speed / (2.0 * spec.decel);
      spec.ped_start.y = -(kLaneHalfWidthM + margin) - brake_dist - spec.ped_speed * t_react;
      break;
    }
    case ScenarioKind::independent_far: {
      spec.decel = 0.0;
      spec.onset_time_s = config.duration_s;  // never fires
      const double separation = eng.uniform(25.0, 45.0);
      spec.ped_start.y = -separation;
      spec.veh_start.x = -0.5 * config.duration_s * spec.veh_speed;
      break;
    }
  }
  return spec;
}

}  // namespace

std::vector<ScenarioSpec> plan_corpus(const CorpusConfig& config) {
  if (config.n_per_kind < 1) {
    throw std::invalid_argument("plan_corpus: n_per_kind must be at least 1");
  }
  static constexpr ScenarioKind kCycle[3] = {ScenarioKind::vehicle_yields,
                                             ScenarioKind::pedestrian_halts,
                                             ScenarioKind::independent_far};
  std::vector<ScenarioSpec> specs;
  specs.reserve(3 * config.n_per_kind);
  for (std::size_t i = 0; i < 3 * config.n_per_kind; ++i) {
    const std::uint64_t param_seed = rng::derive_seed(config.base_seed, 2 * i);
    const std::uint64_t noise_seed = rng::derive_seed(config.base_seed, 2 * i + 1);
    specs.push_back(plan_scenario(kCycle[i % 3], param_seed, noise_seed, config));
  }
  return specs;
}

void generate_corpus(const std::filesystem::path& dir, const CorpusConfig& config) {
  const std::vector<ScenarioSpec> specs = plan_corpus(config);
  generate_corpus(dir, specs);
}

void generate_corpus(const std::filesystem::path& dir, std::span<const ScenarioSpec> specs) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("could not create corpus directory " + dir.string());
  }

  std::string manifest =
      "id\tkind\tseed\tped_speed\tveh_speed\tonset_time\tdecel\tnoise_sigma\t"
      "ped_start_y\tveh_start_x\tduration\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ScenarioSpec& spec = specs[i];
    const std::string id = scenario_id(i);
    const auto [ped, veh] = generate_scenario(spec);
    data::save_tracks(dir / (id + ".txt"), {ped, veh});

    manifest += id;
    manifest += '\t';
    manifest += to_string(spec.kind);
    manifest += '\t';
    manifest += std::to_string(spec.seed);
    for (double v : {spec.ped_speed, spec.veh_speed, spec.onset_time_s, spec.decel,
                     spec.noise_sigma, spec.ped_start.y, spec.veh_start.x, spec.duration_s}) {
      manifest += '\t';
      manifest += numio::format_double(v);
    }
    manifest += '\n';
  }

  std::ofstream out(dir / "manifest.tsv", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not write " + (dir / "manifest.tsv").string());
  out << manifest;
  if (!out) throw IoError("failed while writing " + (dir / "manifest.tsv").string());
}

}  // namespace pedfuse::synth
