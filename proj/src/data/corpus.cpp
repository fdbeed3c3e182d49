#include "pedfuse/data/corpus.hpp"

#include <algorithm>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/data/pipeline.hpp"

namespace pedfuse::data {

std::vector<ScenarioTracks> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("corpus directory has no .txt track files: " + dir.string());

  std::vector<ScenarioTracks> scenarios;
  scenarios.reserve(files.size());
  for (const auto& file : files) {
    std::vector<TrackRecord> tracks = load_tracks(file);
    ScenarioTracks scenario;
    scenario.id = file.stem().string();
    int ped_count = 0, veh_count = 0;
    for (TrackRecord& t : tracks) {
      if (t.kind == AgentKind::pedestrian) {
        ++ped_count;
        scenario.ped = std::move(t);
      } else {
        ++veh_count;
        scenario.veh = std::move(t);
      }
    }
    if (ped_count != 1 || veh_count != 1) {
      throw DataError(file.string() + ": expected exactly one pedestrian and one ego_vehicle, got " +
                      std::to_string(ped_count) + "/" + std::to_string(veh_count));
    }
    scenarios.push_back(std::move(scenario));
  }
  return scenarios;
}

std::vector<SampleGroup> build_sample_groups(const std::vector<ScenarioTracks>& scenarios) {
  std::vector<SampleGroup> groups;
  for (const ScenarioTracks& scenario : scenarios) {
    for (int phase = 0; phase < 2; ++phase) {
      SampleGroup g;
      g.track_id = scenario.id;
      g.phase = phase;
      g.samples = extract_samples(resample_to_5hz(scenario.ped, phase),
                                  resample_to_5hz(scenario.veh, phase));
      if (!g.samples.empty()) groups.push_back(std::move(g));
    }
  }
  return groups;
}

}  // namespace pedfuse::data
