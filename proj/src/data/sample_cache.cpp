#include "pedfuse/data/sample_cache.hpp"

#include <fstream>

#include "pedfuse/common/binary_io.hpp"
#include "pedfuse/common/errors.hpp"

namespace pedfuse::data {

namespace {

constexpr char kMagic[9] = "PFSAMPC1";

void write_sample(std::ostream& os, const TrajectorySample& s) {
  for (const Vec2& p : s.ped_past) {
    bio::write_f64(os, p.x);
    bio::write_f64(os, p.y);
  }
  for (const Vec2& p : s.veh_past) {
    bio::write_f64(os, p.x);
    bio::write_f64(os, p.y);
  }
  for (double theta : s.head_theta) bio::write_f64(os, theta);
  for (const Vec2& p : s.ped_future) {
    bio::write_f64(os, p.x);
    bio::write_f64(os, p.y);
  }
  bio::write_f64(os, s.origin_world.x);
  bio::write_f64(os, s.origin_world.y);
  bio::write_f64(os, s.t);
}

TrajectorySample read_sample(std::istream& is) {
  TrajectorySample s;
  for (Vec2& p : s.ped_past) {
    p.x = bio::read_f64(is);
    p.y = bio::read_f64(is);
  }
  for (Vec2& p : s.veh_past) {
    p.x = bio::read_f64(is);
    p.y = bio::read_f64(is);
  }
  for (double& theta : s.head_theta) theta = bio::read_f64(is);
  for (Vec2& p : s.ped_future) {
    p.x = bio::read_f64(is);
    p.y = bio::read_f64(is);
  }
  s.origin_world.x = bio::read_f64(is);
  s.origin_world.y = bio::read_f64(is);
  s.t = bio::read_f64(is);
  return s;
}

}  // namespace

void save_sample_cache(const std::filesystem::path& path,
                       const std::vector<SampleGroup>& groups) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("could not open " + path.string() + " for writing");
  os.write(kMagic, 8);
  bio::write_u32(os, 1);
  bio::write_u64(os, groups.size());
  for (const SampleGroup& g : groups) {
    bio::write_string(os, g.track_id);
    bio::write_u32(os, static_cast<std::uint32_t>(g.phase));
    bio::write_u64(os, g.samples.size());
    for (const TrajectorySample& s : g.samples) write_sample(os, s);
  }
  if (!os) throw IoError("failed while writing " + path.string());
}

std::vector<SampleGroup> load_sample_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("could not open sample cache " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (is.gcount() != 8 || std::string_view(magic, 8) != std::string_view(kMagic, 8)) {
    throw DataError(path.string() + ": not a sample cache (bad magic)");
  }
  const std::uint32_t version = bio::read_u32(is);
  if (version != 1) {
    throw DataError(path.string() + ": unsupported sample cache version " +
                    std::to_string(version));
  }
  const std::uint64_t group_count = bio::read_u64(is);
  std::vector<SampleGroup> groups;
  groups.reserve(group_count);
  for (std::uint64_t i = 0; i < group_count; ++i) {
    SampleGroup g;
    g.track_id = bio::read_string(is);
    g.phase = static_cast<int>(bio::read_u32(is));
    const std::uint64_t count = bio::read_u64(is);
    g.samples.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) g.samples.push_back(read_sample(is));
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace pedfuse::data
