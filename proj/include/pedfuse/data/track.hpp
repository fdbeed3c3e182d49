#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pedfuse::data {

enum class AgentKind { pedestrian, ego_vehicle };

std::string_view to_string(AgentKind kind);

struct Frame {
  double timestamp = 0.0;  // seconds
  double x = 0.0;          // meters, world frame
  double y = 0.0;
  std::optional<double> head_theta;  // radians, world frame; pedestrians only
  bool occluded = false;

  bool operator==(const Frame&) const = default;
};

struct TrackRecord {
  std::string agent_id;
  AgentKind kind = AgentKind::pedestrian;
  std::vector<Frame> frames;       // strictly increasing, uniformly spaced timestamps
  double source_rate_hz = 0.0;     // inferred integer rate

  bool operator==(const TrackRecord&) const = default;
};

// Text track format, one frame per line:
//   pedfuse-tracks v1
//   agent_id kind timestamp x y theta occluded
// kind is `pedestrian` or `ego_vehicle`; theta is `-` on ego_vehicle rows and a
// radian value on pedestrian rows; occluded is 0 or 1; '#' starts a comment.
// Timestamps are written with six decimal places (microsecond grid), so a
// track serializes byte-identically after any number of read/write cycles.
std::vector<TrackRecord> parse_tracks(std::string_view text);
std::string serialize_tracks(const std::vector<TrackRecord>& tracks);

std::vector<TrackRecord> load_tracks(const std::filesystem::path& path);
void save_tracks(const std::filesystem::path& path, const std::vector<TrackRecord>& tracks);

// Nearest double representable on the file format's microsecond grid.
double snap_time(double t);

}  // namespace pedfuse::data
