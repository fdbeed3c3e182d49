#include "pedfuse/synth/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pedfuse/common/rng.hpp"

namespace pedfuse::synth {

namespace {

// One constant-acceleration stretch starting at t_start.
struct Segment {
  double t_start;
  double pos;
  double vel;
  double acc;
};

// Closed-form evaluation keeps constant-velocity stretches exactly linear in
// the frame timestamps (no accumulation drift).
double position_at(const std::vector<Segment>& profile, double t) {
  const Segment* seg = &profile.front();
  for (const Segment& s : profile) {
    if (t >= s.t_start) seg = &s;
  }
  const double dt = t - seg->t_start;
  return seg->pos + seg->vel * dt + 0.5 * seg->acc * dt * dt;
}

double position_end(const Segment& s, double t_end) {
  const double dt = t_end - s.t_start;
  return s.pos + s.vel * dt + 0.5 * s.acc * dt * dt;
}

std::vector<Segment> pedestrian_profile(const ScenarioSpec& spec) {
  const double y0 = spec.ped_start.y;
  const double v = spec.ped_speed;
  const double t_react = spec.onset_time_s + kReactionDelayS;
  std::vector<Segment> profile = {{0.0, y0, v, 0.0}};
  switch (spec.kind) {
    case ScenarioKind::independent_far:
      break;
    case ScenarioKind::vehicle_yields: {
      const double boost = (kSpeedBoostFactor - 1.0) * v / kBoostRampS;
      const Segment ramp{t_react, position_end(profile.back(), t_react), v, boost};
      profile.push_back(ramp);
      const double t_full = t_react + kBoostRampS;
      profile.push_back({t_full, position_end(ramp, t_full), kSpeedBoostFactor * v, 0.0});
      break;
    }
    case ScenarioKind::pedestrian_halts: {
      const Segment brake{t_react, position_end(profile.back(), t_react), v, -spec.decel};
      profile.push_back(brake);
      const double t_stop = t_react + v / spec.decel;
      profile.push_back({t_stop, position_end(brake, t_stop), 0.0, 0.0});
      break;
    }
  }
  return profile;
}

std::vector<Segment> vehicle_profile(const ScenarioSpec& spec) {
  const double x0 = spec.veh_start.x;
  const double v = spec.veh_speed;
  std::vector<Segment> profile = {{0.0, x0, v, 0.0}};
  if (spec.kind == ScenarioKind::vehicle_yields) {
    const Segment brake{spec.onset_time_s, position_end(profile.back(), spec.onset_time_s), v,
                        -spec.decel};
    profile.push_back(brake);
    const double t_stop = spec.onset_time_s + v / spec.decel;
    profile.push_back({t_stop, position_end(brake, t_stop), 0.0, 0.0});
  }
  return profile;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::vehicle_yields: return "vehicle_yields";
    case ScenarioKind::pedestrian_halts: return "pedestrian_halts";
    case ScenarioKind::independent_far: return "independent_far";
  }
  return "unknown";
}

void validate(const ScenarioSpec& spec) {
  if (spec.ped_speed < 0.0 || spec.veh_speed < 0.0) {
    throw std::invalid_argument("scenario: speeds must be nonnegative");
  }
  if (spec.noise_sigma < 0.0) {
    throw std::invalid_argument("scenario: noise sigma must be nonnegative");
  }
  if (!(spec.duration_s > 0.0)) {
    throw std::invalid_argument("scenario: duration must be positive");
  }
  if (spec.onset_time_s < 0.0) {
    throw std::invalid_argument("scenario: onset time must be nonnegative");
  }
  if (spec.kind != ScenarioKind::independent_far && !(spec.decel > 0.0)) {
    throw std::invalid_argument("scenario: interacting kinds need a positive deceleration");
  }
}

std::pair<data::TrackRecord, data::TrackRecord> generate_scenario(const ScenarioSpec& spec) {
  validate(spec);

  const std::vector<Segment> ped_y = pedestrian_profile(spec);
  const std::vector<Segment> veh_x = vehicle_profile(spec);
  const std::size_t frames =
      static_cast<std::size_t>(std::lround(spec.duration_s * kSourceRateHz)) + 1;
  const bool interacting = spec.kind != ScenarioKind::independent_far;

  data::TrackRecord ped;
  ped.agent_id = "ped";
  ped.kind = data::AgentKind::pedestrian;
  ped.source_rate_hz = kSourceRateHz;
  data::TrackRecord veh;
  veh.agent_id = "veh";
  veh.kind = data::AgentKind::ego_vehicle;
  veh.source_rate_hz = kSourceRateHz;

  rng::Engine noise(spec.seed);
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = data::snap_time(double(k) / kSourceRateHz);
    const Vec2 ped_pos{spec.ped_start.x, position_at(ped_y, t)};
    const Vec2 veh_pos{position_at(veh_x, t), spec.veh_start.y};

    // Gaze leads the speed change: it shifts to the vehicle at onset, from
    // the exact (noise-free) geometry.
    double theta = std::numbers::pi / 2.0;  // walking direction, +y
    if (interacting && t >= spec.onset_time_s) {
      theta = std::atan2(veh_pos.y - ped_pos.y, veh_pos.x - ped_pos.x);
    }

    data::Frame pf;
    pf.timestamp = t;
    pf.x = ped_pos.x + (spec.noise_sigma > 0.0 ? spec.noise_sigma * noise.normal() : 0.0);
    pf.y = ped_pos.y + (spec.noise_sigma > 0.0 ? spec.noise_sigma * noise.normal() : 0.0);
    pf.head_theta = theta;
    ped.frames.push_back(pf);

    data::Frame vf;
    vf.timestamp = t;
    vf.x = veh_pos.x + (spec.noise_sigma > 0.0 ? spec.noise_sigma * noise.normal() : 0.0);
    vf.y = veh_pos.y + (spec.noise_sigma > 0.0 ? spec.noise_sigma * noise.normal() : 0.0);
    veh.frames.push_back(vf);
  }
  return {std::move(ped), std::move(veh)};
}

}  // namespace pedfuse::synth
