#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pedfuse/synth/scenario.hpp"

namespace pedfuse::synth {

struct CorpusConfig {
  std::size_t n_per_kind = 50;
  std::uint64_t base_seed = 1;
  double noise_sigma = 0.03;  // m
  double duration_s = 6.0;
};

/// The deterministic scenario list for a corpus configuration: 3 * n_per_kind
/// specs, kinds cycling vehicle_yields, pedestrian_halts, independent_far,
/// each with randomized speeds/geometry drawn from seed-derived streams.
/// pedestrian_halts start positions are derived so the pedestrian always
/// stops short of the lane edge; vehicle_yields geometry guarantees a clean
/// pre-interaction stretch before gaze and braking set in.
std::vector<ScenarioSpec> plan_corpus(const CorpusConfig& config);

/// Renders plan_corpus() to track files s0000.txt, s0001.txt, ... under `dir`
/// (created if needed) plus a manifest.tsv of per-scenario parameters.
void generate_corpus(const std::filesystem::path& dir, const CorpusConfig& config);

/// Same rendering for an explicit scenario list (e.g. a kind-filtered plan).
void generate_corpus(const std::filesystem::path& dir, std::span<const ScenarioSpec> specs);

}  // namespace pedfuse::synth
