#pragma once

#include <cstdint>
#include <utility>

#include "pedfuse/common/vec2.hpp"
#include "pedfuse/data/track.hpp"

namespace pedfuse::synth {

// Stage geometry: a straight road along x centered on y = 0, the pedestrian
// walking along +y toward/across it, the vehicle driving along +x.
inline constexpr double kLaneHalfWidthM = 1.75;
inline constexpr double kSourceRateHz = 10.0;
// The pedestrian notices the vehicle at onset and adjusts speed only after a
// human reaction delay, so gaze leads kinematics.
inline constexpr double kReactionDelayS = 0.4;
// vehicle_yields: the pedestrian ramps to this speed multiple over the ramp.
inline constexpr double kSpeedBoostFactor = 1.5;
inline constexpr double kBoostRampS = 1.0;

enum class ScenarioKind {
  vehicle_yields,     // vehicle brakes at onset, pedestrian speeds up and crosses
  pedestrian_halts,   // vehicle keeps speed, pedestrian slows to a stop short of the lane
  independent_far,    // no interaction at large separation, both constant velocity
};

std::string_view to_string(ScenarioKind kind);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::independent_far;
  Vec2 ped_start;              // m; pedestrian walks along +y
  double ped_speed = 1.4;      // m/s
  Vec2 veh_start;              // m; vehicle drives along +x in the lane (y = 0)
  double veh_speed = 8.0;      // m/s
  double onset_time_s = 0.0;   // when the interaction (gaze shift) begins
  double decel = 2.0;          // m/s^2, the decelerating agent's magnitude
  double noise_sigma = 0.0;    // m, Gaussian position noise on both agents
  std::uint64_t seed = 0;
  double duration_s = 6.0;     // track length in seconds
};

/// Throws std::invalid_argument when a field violates its invariant.
void validate(const ScenarioSpec& spec);

/// Deterministically renders the spec into a coupled 10 Hz track pair
/// (pedestrian, vehicle). Kinematics are closed-form piecewise
/// constant-acceleration; head orientation points along +y until onset and
/// toward the vehicle afterwards (interacting kinds only); position noise is
/// seeded Gaussian, timestamps and head angles stay exact.
std::pair<data::TrackRecord, data::TrackRecord> generate_scenario(const ScenarioSpec& spec);

}  // namespace pedfuse::synth
