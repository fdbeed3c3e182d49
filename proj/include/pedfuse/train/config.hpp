#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "pedfuse/model/parameters.hpp"

namespace pedfuse::train {

/// Optimization settings plus the model geometry they train. Serialized as
/// key=value text so every output directory can reproduce its own run.
struct TrainConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200;
  std::size_t patience = 10;    // non-improving validation epochs tolerated
  double grad_clip_norm = 5.0;  // global gradient norm cap; 0 disables
  std::uint64_t seed = 1;
  model::CueConfig cues;
  model::ModelDims dims;

  bool operator==(const TrainConfig&) const = default;
};

/// Throws std::invalid_argument on out-of-range settings.
void validate(const TrainConfig& config);

// One `key=value` line per field ('#' starts a comment); cues are stored by
// method name, hidden sizes under ped_hidden/veh_hidden/head_hidden/
// decoder_hidden. Parsing starts from the defaults above and rejects unknown
// or repeated keys, so a config file may list only what it overrides.
std::string serialize_config(const TrainConfig& config);
TrainConfig parse_config(std::string_view text);

TrainConfig load_config(const std::filesystem::path& path);
void save_config(const TrainConfig& config, const std::filesystem::path& path);

}  // namespace pedfuse::train
