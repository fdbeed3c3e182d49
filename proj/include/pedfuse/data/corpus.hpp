#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pedfuse/data/split.hpp"
#include "pedfuse/data/track.hpp"

namespace pedfuse::data {

/// One recorded scene: exactly one pedestrian and one ego vehicle, sharing a
/// 10 Hz time base. The id is the source file's stem.
struct ScenarioTracks {
  std::string id;
  TrackRecord ped;
  TrackRecord veh;
};

/// Loads every .txt track file under `dir` (sorted by filename). Each file
/// must contain exactly one pedestrian and one ego_vehicle track.
std::vector<ScenarioTracks> load_corpus(const std::filesystem::path& dir);

/// Resamples every scenario at both phases and cuts windows, yielding one
/// group per (scenario, phase) keyed by the scenario id.
std::vector<SampleGroup> build_sample_groups(const std::vector<ScenarioTracks>& scenarios);

}  // namespace pedfuse::data
