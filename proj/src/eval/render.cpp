#include "pedfuse/eval/render.hpp"

#include <fstream>
#include <sstream>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"

namespace pedfuse::eval {

namespace {

constexpr std::string_view kMapHeader = "pedfuse-map v1";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (in >> f) fields.push_back(f);
  return fields;
}

Vec2 to_pixel(Vec2 p) {
  return {kBevCanvasPx / 2 + kBevPxPerMeter * p.x, kBevCanvasPx / 2 - kBevPxPerMeter * p.y};
}

void append_polygon(std::string& svg, const std::vector<Vec2>& world, Vec2 origin,
                    std::string_view fill) {
  svg += "<polygon points=\"";
  for (std::size_t i = 0; i < world.size(); ++i) {
    const Vec2 px = to_pixel(world[i] - origin);
    if (i) svg += ' ';
    svg += numio::format_double(px.x) + "," + numio::format_double(px.y);
  }
  svg += "\" fill=\"";
  svg += fill;
  svg += "\"/>\n";
}

void append_circles(std::string& svg, const std::array<Vec2, data::kFutureSteps>& points,
                    std::string_view fill, double radius) {
  for (const Vec2& p : points) {
    const Vec2 px = to_pixel(p);
    svg += "<circle cx=\"" + numio::format_double(px.x) + "\" cy=\"" +
           numio::format_double(px.y) + "\" r=\"" + numio::format_double(radius) + "\" fill=\"";
    svg += fill;
    svg += "\"/>\n";
  }
}

std::string_view forecast_fill(std::string_view label) {
  if (label == "fused") return "#d62728";     // red
  if (label == "baseline") return "#1f77b4";  // blue
  return "#808080";
}

}  // namespace

BevMap parse_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kMapHeader) {
    throw DataError("map line 1: expected header '" + std::string(kMapHeader) + "'");
  }
  ++line_no;
  BevMap map;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    const std::string where = "map line " + std::to_string(line_no);
    const std::string& kind = fields.front();
    if (kind != "street" && kind != "sidewalk") {
      throw DataError(where + ": unknown region kind '" + kind + "'");
    }
    if (fields.size() < 7 || (fields.size() - 1) % 2 != 0) {
      throw DataError(where + ": a polygon needs at least three x y vertex pairs");
    }
    std::vector<Vec2> polygon;
    for (std::size_t i = 1; i < fields.size(); i += 2) {
      polygon.push_back({numio::parse_double(fields[i], "map x"),
                         numio::parse_double(fields[i + 1], "map y")});
    }
    (kind == "street" ? map.street : map.sidewalk).push_back(std::move(polygon));
  }
  return map;
}

BevMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("could not open map file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_map(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void render_bev(const data::TrajectorySample& sample,
                const std::vector<LabeledForecast>& forecasts, const BevMap& map,
                const std::filesystem::path& out_path) {
  const std::string size = numio::format_double(kBevCanvasPx);
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size +
         "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  svg += "<rect width=\"" + size + "\" height=\"" + size + "\" fill=\"white\"/>\n";
  for (const auto& polygon : map.street) {
    append_polygon(svg, polygon, sample.origin_world, "black");
  }
  for (const auto& polygon : map.sidewalk) {
    append_polygon(svg, polygon, sample.origin_world, "white");
  }
  append_circles(svg, sample.ped_future, "#f1c40f", 4.0);  // yellow ground truth
  for (const LabeledForecast& f : forecasts) {
    append_circles(svg, f.forecast.positions, forecast_fill(f.label), 3.0);
  }
  svg += "</svg>\n";

  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not open " + out_path.string() + " for writing");
  out << svg;
  if (!out) throw IoError("failed while writing " + out_path.string());
}

}  // namespace pedfuse::eval
