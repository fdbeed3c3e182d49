#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/data/corpus.hpp"
#include "pedfuse/data/pipeline.hpp"
#include "pedfuse/synth/corpus.hpp"
#include "pedfuse/synth/scenario.hpp"
#include "test_util.hpp"

using namespace pedfuse;
using namespace pedfuse::synth;

namespace {

ScenarioSpec base_spec(ScenarioKind kind) {
  ScenarioSpec spec;
  spec.kind = kind;
  // Halting needs room: from y0 the pedestrian covers 1.4 * 1.9 m before
  // reacting plus 1.4^2 / (2 * 0.8) m of braking, stopping at y0 + 3.885.
  spec.ped_start = {0.0, kind == ScenarioKind::pedestrian_halts ? -6.2 : -5.0};
  spec.ped_speed = 1.4;
  spec.veh_start = {-30.0, 0.0};
  spec.veh_speed = 8.0;
  spec.onset_time_s = 1.5;
  spec.decel = kind == ScenarioKind::pedestrian_halts ? 0.8 : 2.0;
  spec.noise_sigma = 0.0;
  spec.seed = 99;
  spec.duration_s = 6.0;
  return spec;
}

// Per-frame speed from position differences (the oracle used against the
// generator's closed-form kinematics).
std::vector<double> speeds_of(const std::vector<data::Frame>& frames, bool along_y) {
  std::vector<double> v;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double d = along_y ? frames[i].y - frames[i - 1].y : frames[i].x - frames[i - 1].x;
    v.push_back(d / (frames[i].timestamp - frames[i - 1].timestamp));
  }
  return v;
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("spec validation rejects bad fields") {
  ScenarioSpec spec = base_spec(ScenarioKind::vehicle_yields);
  spec.ped_speed = -0.1;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = base_spec(ScenarioKind::pedestrian_halts);
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = base_spec(ScenarioKind::vehicle_yields);
  spec.decel = 0.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec = base_spec(ScenarioKind::independent_far);
  spec.decel = 0.0;  // fine for the non-interacting kind
  CHECK_NOTHROW(validate(spec));
  spec.duration_s = 0.0;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

TEST_CASE("independent_far with zero noise is exactly linear in time") {
  const ScenarioSpec spec = base_spec(ScenarioKind::independent_far);
  const auto [ped, veh] = generate_scenario(spec);
  REQUIRE(ped.frames.size() == 61);
  REQUIRE(veh.frames.size() == 61);
  for (const data::Frame& f : ped.frames) {
    CHECK(f.x == spec.ped_start.x);
    CHECK(f.y == spec.ped_start.y + spec.ped_speed * f.timestamp);
    CHECK(*f.head_theta == std::numbers::pi / 2.0);  // never looks at the car
  }
  for (const data::Frame& f : veh.frames) {
    CHECK(f.y == spec.veh_start.y);
    CHECK(f.x == spec.veh_start.x + spec.veh_speed * f.timestamp);
  }
}

TEST_CASE("vehicle_yields: vehicle slows after onset, pedestrian speeds up") {
  const ScenarioSpec spec = base_spec(ScenarioKind::vehicle_yields);
  const auto [ped, veh] = generate_scenario(spec);

  const std::vector<double> veh_v = speeds_of(veh.frames, false);
  double pre_max = 0.0;
  for (std::size_t i = 0; i < veh_v.size(); ++i) {
    const double t = veh.frames[i + 1].timestamp;
    if (t <= spec.onset_time_s) pre_max = std::max(pre_max, veh_v[i]);
    if (i > 0 && veh.frames[i].timestamp >= spec.onset_time_s) {
      CHECK(veh_v[i] <= veh_v[i - 1] + 1e-9);  // non-increasing after onset
    }
  }
  CHECK(pre_max == doctest::Approx(spec.veh_speed).epsilon(1e-12));
  CHECK(veh_v.back() < spec.veh_speed);

  const std::vector<double> ped_v = speeds_of(ped.frames, true);
  double pre_mean = 0.0, post_mean = 0.0;
  std::size_t pre_n = 0, post_n = 0;
  const double t_ramp_done = spec.onset_time_s + kReactionDelayS + kBoostRampS;
  for (std::size_t i = 0; i < ped_v.size(); ++i) {
    const double t = ped.frames[i + 1].timestamp;
    if (t <= spec.onset_time_s) {
      pre_mean += ped_v[i];
      ++pre_n;
    } else if (t > t_ramp_done) {
      post_mean += ped_v[i];
      ++post_n;
    }
  }
  pre_mean /= double(pre_n);
  post_mean /= double(post_n);
  CHECK(post_mean > pre_mean);
  CHECK(post_mean == doctest::Approx(kSpeedBoostFactor * spec.ped_speed).epsilon(1e-9));
}

TEST_CASE("pedestrian_halts: stops short of the lane edge") {
  const ScenarioSpec spec = base_spec(ScenarioKind::pedestrian_halts);
  const auto [ped, veh] = generate_scenario(spec);

  const std::vector<double> ped_v = speeds_of(ped.frames, true);
  CHECK(std::abs(ped_v.back()) < 0.01);
  CHECK(ped.frames.back().y < -kLaneHalfWidthM);

  // The vehicle never brakes in this kind.
  const std::vector<double> veh_v = speeds_of(veh.frames, false);
  for (double v : veh_v) CHECK(v == doctest::Approx(spec.veh_speed).epsilon(1e-9));
}

TEST_CASE("gaze shifts to the vehicle bearing at onset") {
  for (ScenarioKind kind : {ScenarioKind::vehicle_yields, ScenarioKind::pedestrian_halts}) {
    const ScenarioSpec spec = base_spec(kind);
    const auto [ped, veh] = generate_scenario(spec);
    for (std::size_t i = 0; i < ped.frames.size(); ++i) {
      const data::Frame& pf = ped.frames[i];
      const data::Frame& vf = veh.frames[i];
      if (pf.timestamp < spec.onset_time_s) {
        CHECK(*pf.head_theta == std::numbers::pi / 2.0);
      } else {
        const double bearing = std::atan2(vf.y - pf.y, vf.x - pf.x);
        CHECK(*pf.head_theta == bearing);
        CHECK(data::looking_flag(*pf.head_theta, {pf.x, pf.y}, {vf.x, vf.y},
                                 data::kDefaultLookingHalfAngle) == 1);
      }
    }
  }
}

TEST_CASE("generation is a pure function of the spec") {
  ScenarioSpec spec = base_spec(ScenarioKind::vehicle_yields);
  spec.noise_sigma = 0.05;
  const auto a = generate_scenario(spec);
  const auto b = generate_scenario(spec);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);

  spec.seed = 100;
  const auto c = generate_scenario(spec);
  CHECK(a.first != c.first);

  // Noise perturbs positions but not timestamps or head angles.
  const auto clean = generate_scenario(base_spec(ScenarioKind::vehicle_yields));
  double max_shift = 0.0;
  for (std::size_t i = 0; i < a.first.frames.size(); ++i) {
    CHECK(a.first.frames[i].timestamp == clean.first.frames[i].timestamp);
    CHECK(*a.first.frames[i].head_theta == *clean.first.frames[i].head_theta);
    max_shift = std::max(max_shift, std::abs(a.first.frames[i].y - clean.first.frames[i].y));
  }
  CHECK(max_shift > 0.0);
  CHECK(max_shift < 6.0 * 0.05);
}

TEST_CASE("generated tracks survive the text format and the pipeline") {
  ScenarioSpec spec = base_spec(ScenarioKind::pedestrian_halts);
  spec.noise_sigma = 0.04;
  const auto [ped, veh] = generate_scenario(spec);
  const std::vector<data::TrackRecord> tracks = {ped, veh};
  const auto reread = data::parse_tracks(data::serialize_tracks(tracks));
  CHECK(reread == tracks);
  CHECK(reread[0].source_rate_hz == 10.0);

  std::size_t total = 0;
  for (int phase = 0; phase < 2; ++phase) {
    total += data::extract_samples(data::resample_to_5hz(ped, phase),
                                   data::resample_to_5hz(veh, phase))
                 .size();
  }
  CHECK(total == 61 - 28);
}

TEST_CASE("corpus planning keeps the halt scenarios short of the lane") {
  CorpusConfig config;
  config.n_per_kind = 20;
  config.base_seed = 7;
  const std::vector<ScenarioSpec> specs = plan_corpus(config);
  REQUIRE(specs.size() == 60);

  std::size_t halts = 0;
  for (const ScenarioSpec& spec : specs) {
    CHECK_NOTHROW(validate(spec));
    if (spec.kind != ScenarioKind::pedestrian_halts) continue;
    ++halts;
    const double t_react = spec.onset_time_s + kReactionDelayS;
    const double stop_y = spec.ped_start.y + spec.ped_speed * t_react +
                          spec.ped_speed * spec.ped_speed / (2.0 * spec.decel);
    CHECK(stop_y < -kLaneHalfWidthM - 0.1);
  }
  CHECK(halts == 20);

  // Planning is deterministic and seed-sensitive.
  CHECK(plan_corpus(config).size() == 60);
  CHECK(plan_corpus(config)[0].ped_speed == specs[0].ped_speed);
  CorpusConfig other = config;
  other.base_seed = 8;
  CHECK(plan_corpus(other)[0].ped_speed != specs[0].ped_speed);

  config.n_per_kind = 0;
  CHECK_THROWS_AS(plan_corpus(config), std::invalid_argument);
}

TEST_CASE("corpus generation writes loadable, reproducible files") {
  TempDir dir("synth-corpus");
  CorpusConfig config;
  config.n_per_kind = 1;
  config.base_seed = 11;
  config.noise_sigma = 0.02;

  generate_corpus(dir.path / "a", config);
  generate_corpus(dir.path / "b", config);

  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir.path / "a")) {
    files.push_back(e.path());
  }
  CHECK(files.size() == 4);  // 3 scenario files + manifest.tsv

  for (const char* name : {"s0000.txt", "s0001.txt", "s0002.txt", "manifest.tsv"}) {
    CHECK(file_bytes(dir.path / "a" / name) == file_bytes(dir.path / "b" / name));
    CHECK(!file_bytes(dir.path / "a" / name).empty());
  }

  const auto scenarios = data::load_corpus(dir.path / "a");
  REQUIRE(scenarios.size() == 3);
  const auto groups = data::build_sample_groups(scenarios);
  CHECK(groups.size() == 6);

  const std::string manifest = file_bytes(dir.path / "a" / "manifest.tsv");
  CHECK(manifest.find("vehicle_yields") != std::string::npos);
  CHECK(manifest.find("pedestrian_halts") != std::string::npos);
  CHECK(manifest.find("independent_far") != std::string::npos);
}
