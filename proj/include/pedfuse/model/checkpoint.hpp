#pragma once

#include <filesystem>

#include "pedfuse/model/parameters.hpp"

namespace pedfuse::model {

// Checkpoint, a versioned binary parameter snapshot. Layout (little-endian):
//   magic "PFCHKPT1" (8 bytes), u32 version = 1,
//   u8 use_vehicle, u8 use_head, u16 reserved = 0,
//   u32 ped_hidden, u32 veh_hidden, u32 head_hidden, u32 decoder_hidden,
//   u64 init_seed,
//   f64 parameter values in the canonical flattening (see parameters.hpp).
// Disabled encoders write hidden dim 0 and no values. Save/load round-trips
// bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const ModelParameters& params);
ModelParameters load_checkpoint(const std::filesystem::path& path);

}  // namespace pedfuse::model
