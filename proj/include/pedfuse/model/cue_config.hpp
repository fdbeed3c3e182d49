#pragma once

#include <string>
#include <string_view>

namespace pedfuse::model {

/// Which input streams the fusion model consumes. The pedestrian track is
/// always on; the named experiments are baseline (neither cue), method1
/// (vehicle track) and method2 (vehicle track + head orientation).
struct CueConfig {
  bool use_vehicle = false;
  bool use_head = false;

  bool operator==(const CueConfig&) const = default;
};

inline constexpr CueConfig kBaseline{false, false};
inline constexpr CueConfig kMethod1{true, false};
inline constexpr CueConfig kMethod2{true, true};

/// "baseline" | "method1" | "method2" | "head_only" (the unnamed combination).
std::string method_name(CueConfig cues);

/// Inverse of method_name; throws std::invalid_argument on unknown names.
CueConfig cues_for_method(std::string_view name);

}  // namespace pedfuse::model
