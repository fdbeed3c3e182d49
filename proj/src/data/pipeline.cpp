#include "pedfuse/data/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pedfuse/common/errors.hpp"

namespace pedfuse::data {

TrackRecord resample_to_5hz(const TrackRecord& track, int phase) {
  if (phase != 0 && phase != 1) {
    throw std::invalid_argument("resample_to_5hz: phase must be 0 or 1, got " +
                                std::to_string(phase));
  }
  if (track.source_rate_hz != 10.0) {
    throw DataError("resample_to_5hz: track '" + track.agent_id + "' has rate " +
                    std::to_string(track.source_rate_hz) + " Hz, expected 10");
  }
  TrackRecord out;
  out.agent_id = track.agent_id;
  out.kind = track.kind;
  out.source_rate_hz = 5.0;
  for (std::size_t i = static_cast<std::size_t>(phase); i < track.frames.size(); i += 2) {
    out.frames.push_back(track.frames[i]);
  }
  return out;
}

TrajectorySample to_pedestrian_frame(std::span<const Vec2> ped_window,
                                     std::span<const Vec2> veh_past,
                                     std::span<const double> head_theta, double t) {
  if (ped_window.size() != kPastSteps + kFutureSteps || veh_past.size() != kPastSteps ||
      head_theta.size() != kPastSteps) {
    throw std::invalid_argument("to_pedestrian_frame: window sizes " +
                                std::to_string(ped_window.size()) + "/" +
                                std::to_string(veh_past.size()) + "/" +
                                std::to_string(head_theta.size()) + ", expected 15/5/5");
  }
  TrajectorySample s;
  s.origin_world = ped_window[kPastSteps - 1];
  s.t = t;
  for (std::size_t i = 0; i < kPastSteps; ++i) {
    s.ped_past[i] = ped_window[i] - s.origin_world;
    s.veh_past[i] = veh_past[i] - s.origin_world;
    s.head_theta[i] = head_theta[i];
  }
  for (std::size_t i = 0; i < kFutureSteps; ++i) {
    s.ped_future[i] = ped_window[kPastSteps + i] - s.origin_world;
  }
  return s;
}

std::vector<TrajectorySample> extract_samples(const TrackRecord& ped, const TrackRecord& veh) {
  if (ped.kind != AgentKind::pedestrian || veh.kind != AgentKind::ego_vehicle) {
    throw std::invalid_argument("extract_samples: expects a pedestrian and an ego_vehicle track");
  }
  if (ped.source_rate_hz != kModelRateHz || veh.source_rate_hz != kModelRateHz) {
    throw DataError("extract_samples: tracks must be at 5 Hz");
  }
  if (ped.frames.size() != veh.frames.size()) {
    throw DataError("extract_samples: tracks '" + ped.agent_id + "' and '" + veh.agent_id +
                    "' differ in length (" + std::to_string(ped.frames.size()) + " vs " +
                    std::to_string(veh.frames.size()) + ")");
  }
  for (std::size_t i = 0; i < ped.frames.size(); ++i) {
    if (std::abs(ped.frames[i].timestamp - veh.frames[i].timestamp) > 1e-9) {
      throw DataError("extract_samples: tracks '" + ped.agent_id + "' and '" + veh.agent_id +
                      "' are misaligned at frame " + std::to_string(i));
    }
    if (ped.frames[i].head_theta == std::nullopt) {
      throw DataError("extract_samples: pedestrian frame " + std::to_string(i) +
                      " is missing head orientation");
    }
  }

  const std::size_t window = kPastSteps + kFutureSteps;
  std::vector<TrajectorySample> samples;
  if (ped.frames.size() < window) return samples;
  for (std::size_t start = 0; start + window <= ped.frames.size(); ++start) {
    bool occluded = false;
    for (std::size_t k = 0; k < window; ++k) occluded = occluded || ped.frames[start + k].occluded;
    if (occluded) continue;

    std::array<Vec2, kPastSteps + kFutureSteps> ped_window;
    std::array<Vec2, kPastSteps> veh_past;
    std::array<double, kPastSteps> head;
    for (std::size_t k = 0; k < window; ++k) {
      const Frame& f = ped.frames[start + k];
      ped_window[k] = {f.x, f.y};
    }
    for (std::size_t k = 0; k < kPastSteps; ++k) {
      const Frame& f = veh.frames[start + k];
      veh_past[k] = {f.x, f.y};
      head[k] = *ped.frames[start + k].head_theta;
    }
    samples.push_back(to_pedestrian_frame(ped_window, veh_past, head,
                                          ped.frames[start + kPastSteps - 1].timestamp));
  }
  return samples;
}

int looking_flag(double head_theta, Vec2 ped_pos, Vec2 veh_pos, double half_angle) {
  if (!std::isfinite(head_theta) || !std::isfinite(ped_pos.x) || !std::isfinite(ped_pos.y) ||
      !std::isfinite(veh_pos.x) || !std::isfinite(veh_pos.y)) {
    throw std::invalid_argument("looking_flag: non-finite input");
  }
  const Vec2 d = veh_pos - ped_pos;
  if (d.x == 0.0 && d.y == 0.0) {
    throw std::invalid_argument("looking_flag: pedestrian and vehicle positions coincide");
  }
  const double bearing = std::atan2(d.y, d.x);
  const double diff = std::abs(std::atan2(std::sin(head_theta - bearing),
                                          std::cos(head_theta - bearing)));
  return diff <= half_angle ? 1 : 0;
}

}  // namespace pedfuse::data
