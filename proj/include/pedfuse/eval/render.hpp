#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pedfuse/data/pipeline.hpp"
#include "pedfuse/model/fusion.hpp"

namespace pedfuse::eval {

/// Street/sidewalk polygons in world coordinates. The canvas background is
/// sidewalk-white; street polygons are painted black, and any sidewalk
/// polygons are painted back on top (islands inside the street).
struct BevMap {
  std::vector<std::vector<Vec2>> street;
  std::vector<std::vector<Vec2>> sidewalk;

  bool empty() const { return street.empty() && sidewalk.empty(); }
};

// Map text format: a `pedfuse-map v1` header, then one polygon per line as
// `street|sidewalk x0 y0 x1 y1 ...` with at least three vertices.
BevMap parse_map(std::string_view text);
BevMap load_map(const std::filesystem::path& path);

struct LabeledForecast {
  std::string label;  // "fused" draws red, "baseline" blue, others gray
  model::Forecast forecast;
};

// Fixed affine view: 600x600 canvas at 40 px/m, the sample's origin (the
// pedestrian's position at time t) anchored at pixel (300, 300), world +y up.
inline constexpr double kBevCanvasPx = 600.0;
inline constexpr double kBevPxPerMeter = 40.0;

/// Writes a bird's-eye SVG of one sample: the map (translated into the
/// sample's pedestrian-centered frame), yellow circles for the ground-truth
/// future, and one circle series per forecast. Forecasts must already be in
/// the sample's frame.
void render_bev(const data::TrajectorySample& sample,
                const std::vector<LabeledForecast>& forecasts, const BevMap& map,
                const std::filesystem::path& out_path);

}  // namespace pedfuse::eval
