#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pedfuse/data/pipeline.hpp"

namespace pedfuse::data {

/// All windows cut from one (track, phase) resampling. Splitting never
/// separates a group, and both phases of one track stay together, because
/// their windows overlap by up to 14 of 15 frames.
struct SampleGroup {
  std::string track_id;
  int phase = 0;
  std::vector<TrajectorySample> samples;
};

struct SplitRatios {
  double train = 0.7;
  double validation = 0.2;
  double test = 0.1;
};

struct GroupAssignment {
  std::string track_id;
  int phase = 0;
  std::string split;  // "train" | "validation" | "test"

  bool operator==(const GroupAssignment&) const = default;
};

struct DatasetSplit {
  std::vector<TrajectorySample> train;
  std::vector<TrajectorySample> validation;
  std::vector<TrajectorySample> test;
  std::vector<GroupAssignment> manifest;  // ordered by (track_id, phase)
};

/// Deterministic seeded track-level assignment: the distinct track ids are
/// shuffled, then dealt to splits with largest-remainder rounding of the
/// ratios. Samples keep their within-group order.
DatasetSplit split_dataset(const std::vector<SampleGroup>& groups, SplitRatios ratios,
                           std::uint64_t seed);

/// Re-applies a recorded assignment to freshly extracted groups, so an
/// evaluation can rebuild the exact split a checkpoint was trained on.
/// Throws DataError when the manifest and the groups do not cover each other
/// one-to-one.
DatasetSplit apply_manifest(const std::vector<SampleGroup>& groups,
                            const std::vector<GroupAssignment>& manifest);

// Manifest text: one `track_id phase split` line per group.
std::string serialize_manifest(const std::vector<GroupAssignment>& manifest);
std::vector<GroupAssignment> parse_manifest(std::string_view text);

}  // namespace pedfuse::data
