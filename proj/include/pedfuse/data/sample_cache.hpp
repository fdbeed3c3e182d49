#pragma once

#include <filesystem>
#include <vector>

#include "pedfuse/data/split.hpp"

namespace pedfuse::data {

// Sample cache, a binary snapshot of extracted groups for fast re-training.
// Layout (all integers and reals little-endian):
//   magic "PFSAMPC1" (8 bytes), u32 version = 1, u64 group count,
//   per group: track_id (u32 length + bytes), u32 phase, u64 sample count,
//   per sample 48 f64: ped_past x,y ×5; veh_past x,y ×5; head_theta ×5;
//   ped_future x,y ×10; origin_world x,y; t.
void save_sample_cache(const std::filesystem::path& path,
                       const std::vector<SampleGroup>& groups);
std::vector<SampleGroup> load_sample_cache(const std::filesystem::path& path);

}  // namespace pedfuse::data
