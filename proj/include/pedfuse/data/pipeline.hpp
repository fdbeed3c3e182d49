#pragma once

#include <array>
#include <numbers>
#include <span>
#include <vector>

#include "pedfuse/common/vec2.hpp"
#include "pedfuse/data/track.hpp"

namespace pedfuse::data {

// Windows cover one second of history and two seconds of future at 0.2 s.
inline constexpr std::size_t kPastSteps = 5;
inline constexpr std::size_t kFutureSteps = 10;
inline constexpr double kStepSeconds = 0.2;
inline constexpr double kModelRateHz = 5.0;

/// One training/evaluation window, expressed in the pedestrian-centered
/// frame: every position is translated so the pedestrian at time t sits at
/// the origin (axes unrotated). Head orientation stays a world-frame angle.
struct TrajectorySample {
  std::array<Vec2, kPastSteps> ped_past;      // chronological, last entry exactly (0,0)
  std::array<Vec2, kPastSteps> veh_past;      // same translation applied
  std::array<double, kPastSteps> head_theta;  // radians, world frame
  std::array<Vec2, kFutureSteps> ped_future;  // targets, same frame
  Vec2 origin_world;                          // the removed offset
  double t = 0.0;                             // seconds, time of the origin frame

  bool operator==(const TrajectorySample&) const = default;
};

/// Keeps frames phase, phase+2, phase+4, ... of a 10 Hz track. The two phases
/// together realize a 0.1 s sliding start over the source track.
TrackRecord resample_to_5hz(const TrackRecord& track, int phase);

/// Translates a 15-point pedestrian window (5 past + 10 future), the matching
/// vehicle past, and head angles into the pedestrian-centered frame. The
/// origin is the pedestrian's position at the window's 5th point.
TrajectorySample to_pedestrian_frame(std::span<const Vec2> ped_window,
                                     std::span<const Vec2> veh_past,
                                     std::span<const double> head_theta, double t);

/// Every full 15-frame window of a time-aligned 5 Hz pedestrian/vehicle track
/// pair, skipping windows that contain an occluded pedestrian frame.
std::vector<TrajectorySample> extract_samples(const TrackRecord& ped, const TrackRecord& veh);

/// 1 iff head_theta points within half_angle (inclusive) of the bearing from
/// the pedestrian to the vehicle.
int looking_flag(double head_theta, Vec2 ped_pos, Vec2 veh_pos, double half_angle);

inline constexpr double kDefaultLookingHalfAngle = 30.0 * std::numbers::pi / 180.0;

}  // namespace pedfuse::data
