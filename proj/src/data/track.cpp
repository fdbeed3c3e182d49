#include "pedfuse/data/track.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"

namespace pedfuse::data {

namespace {

constexpr std::string_view kHeader = "pedfuse-tracks v1";

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

AgentKind parse_kind(std::string_view token, std::size_t line_no) {
  if (token == "pedestrian") return AgentKind::pedestrian;
  if (token == "ego_vehicle") return AgentKind::ego_vehicle;
  throw DataError(at_line(line_no) + "unknown agent kind '" + std::string(token) + "'");
}

// Infer and validate the uniform frame rate; throws naming the first bad gap.
void finalize_track(TrackRecord& track, const std::vector<std::size_t>& frame_lines) {
  if (track.frames.size() < 2) {
    throw DataError("track '" + track.agent_id + "': needs at least 2 frames");
  }
  const double dt = track.frames[1].timestamp - track.frames[0].timestamp;
  const double rate = std::round(1.0 / dt);
  if (!(rate >= 1.0) || std::abs(1.0 / dt - rate) > 1e-3) {
    throw DataError("track '" + track.agent_id + "': non-integer frame rate inferred from spacing " +
                    numio::format_double(dt));
  }
  const double nominal = 1.0 / rate;
  for (std::size_t i = 1; i < track.frames.size(); ++i) {
    const double gap = track.frames[i].timestamp - track.frames[i - 1].timestamp;
    if (std::abs(gap - nominal) > 1e-6) {
      throw DataError(at_line(frame_lines[i]) + "track '" + track.agent_id +
                      "': nonuniform timestamp spacing " + numio::format_double(gap) +
                      " (expected " + numio::format_double(nominal) + ")");
    }
  }
  track.source_rate_hz = rate;
}

}  // namespace

std::string_view to_string(AgentKind kind) {
  return kind == AgentKind::pedestrian ? "pedestrian" : "ego_vehicle";
}

double snap_time(double t) { return numio::parse_double(numio::format_fixed(t, 6), "timestamp"); }

std::vector<TrackRecord> parse_tracks(std::string_view text) {
  std::vector<TrackRecord> tracks;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::vector<std::size_t>> frame_lines;  // parallel to tracks, for error messages

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (!saw_header) {
      if (line.find(kHeader) == std::string_view::npos || fields.size() != 2) {
        throw DataError(at_line(line_no) + "expected header '" + std::string(kHeader) + "'");
      }
      saw_header = true;
      continue;
    }

    if (fields.size() != 7) {
      throw DataError(at_line(line_no) + "expected 7 fields, got " +
                      std::to_string(fields.size()));
    }
    const std::string agent_id(fields[0]);
    const AgentKind kind = parse_kind(fields[1], line_no);
    Frame frame;
    frame.timestamp = numio::parse_double(fields[2], "timestamp");
    frame.x = numio::parse_double(fields[3], "x");
    frame.y = numio::parse_double(fields[4], "y");
    if (fields[5] == "-") {
      if (kind == AgentKind::pedestrian) {
        throw DataError(at_line(line_no) + "pedestrian row is missing head orientation");
      }
    } else {
      if (kind == AgentKind::ego_vehicle) {
        throw DataError(at_line(line_no) + "ego_vehicle row must use '-' for head orientation");
      }
      frame.head_theta = numio::parse_double(fields[5], "theta");
    }
    if (fields[6] == "0") {
      frame.occluded = false;
    } else if (fields[6] == "1") {
      frame.occluded = true;
    } else {
      throw DataError(at_line(line_no) + "occluded flag must be 0 or 1, got '" +
                      std::string(fields[6]) + "'");
    }

    auto [it, inserted] = index_of.try_emplace(agent_id, tracks.size());
    if (inserted) {
      tracks.push_back(TrackRecord{agent_id, kind, {}, 0.0});
      frame_lines.emplace_back();
    }
    TrackRecord& track = tracks[it->second];
    if (track.kind != kind) {
      throw DataError(at_line(line_no) + "agent '" + agent_id + "' changes kind");
    }
    if (!track.frames.empty() && frame.timestamp <= track.frames.back().timestamp) {
      throw DataError(at_line(line_no) + "agent '" + agent_id +
                      "': timestamps must be strictly increasing");
    }
    track.frames.push_back(frame);
    frame_lines[it->second].push_back(line_no);
  }

  if (!saw_header) throw DataError("empty input: expected header '" + std::string(kHeader) + "'");
  for (std::size_t i = 0; i < tracks.size(); ++i) finalize_track(tracks[i], frame_lines[i]);
  return tracks;
}

std::string serialize_tracks(const std::vector<TrackRecord>& tracks) {
  std::string out(kHeader);
  out += '\n';
  for (const TrackRecord& track : tracks) {
    for (const Frame& f : track.frames) {
      out += track.agent_id;
      out += ' ';
      out += to_string(track.kind);
      out += ' ';
      out += numio::format_fixed(f.timestamp, 6);
      out += ' ';
      out += numio::format_double(f.x);
      out += ' ';
      out += numio::format_double(f.y);
      out += ' ';
      out += f.head_theta ? numio::format_double(*f.head_theta) : "-";
      out += ' ';
      out += f.occluded ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::vector<TrackRecord> load_tracks(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("could not open track file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_tracks(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_tracks(const std::filesystem::path& path, const std::vector<TrackRecord>& tracks) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not open " + path.string() + " for writing");
  out << serialize_tracks(tracks);
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace pedfuse::data
