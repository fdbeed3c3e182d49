#include "pedfuse/data/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"
#include "pedfuse/common/rng.hpp"

namespace pedfuse::data {

DatasetSplit split_dataset(const std::vector<SampleGroup>& groups, SplitRatios ratios,
                           std::uint64_t seed) {
  if (groups.empty()) throw DataError("split_dataset: empty corpus");
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0.0 || ratios.validation < 0.0 || ratios.test < 0.0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_dataset: ratios must be non-negative and sum to 1");
  }

  // Distinct track ids in first-appearance order, then a seeded shuffle.
  std::vector<std::string> track_ids;
  std::unordered_map<std::string, std::size_t> seen;
  for (const SampleGroup& g : groups) {
    if (seen.try_emplace(g.track_id, track_ids.size()).second) track_ids.push_back(g.track_id);
  }
  rng::Engine eng(seed);
  eng.shuffle(track_ids);

  // Largest-remainder allocation of track counts; leftovers go to the
  // largest fractional parts, ties favoring train, then validation.
  const std::size_t n = track_ids.size();
  const std::array<double, 3> want = {ratios.train * double(n), ratios.validation * double(n),
                                      ratios.test * double(n)};
  std::array<std::size_t, 3> counts{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(want[i]));
    assigned += counts[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return want[a] - std::floor(want[a]) > want[b] - std::floor(want[b]);
  });
  for (std::size_t left = n - assigned, k = 0; k < left; ++k) ++counts[order[k % 3]];

  std::unordered_map<std::string, const char*> split_of;
  static constexpr std::array<const char*, 3> kNames = {"train", "validation", "test"};
  std::size_t cursor = 0;
  for (int i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < counts[i]; ++k) split_of[track_ids[cursor++]] = kNames[i];
  }

  DatasetSplit out;
  for (const SampleGroup& g : groups) {
    const char* name = split_of.at(g.track_id);
    std::vector<TrajectorySample>* dest = &out.train;
    if (name == kNames[1]) dest = &out.validation;
    if (name == kNames[2]) dest = &out.test;
    dest->insert(dest->end(), g.samples.begin(), g.samples.end());
    out.manifest.push_back(GroupAssignment{g.track_id, g.phase, name});
  }
  std::sort(out.manifest.begin(), out.manifest.end(), [](const auto& a, const auto& b) {
    return a.track_id != b.track_id ? a.track_id < b.track_id : a.phase < b.phase;
  });
  return out;
}

DatasetSplit apply_manifest(const std::vector<SampleGroup>& groups,
                            const std::vector<GroupAssignment>& manifest) {
  auto key = [](const std::string& id, int phase) { return id + '\t' + std::to_string(phase); };
  std::unordered_map<std::string, std::string> split_of;
  for (const GroupAssignment& a : manifest) {
    if (!split_of.try_emplace(key(a.track_id, a.phase), a.split).second) {
      throw DataError("manifest assigns (" + a.track_id + ", phase " + std::to_string(a.phase) +
                      ") twice");
    }
  }
  DatasetSplit out;
  for (const SampleGroup& g : groups) {
    const auto it = split_of.find(key(g.track_id, g.phase));
    if (it == split_of.end()) {
      throw DataError("manifest has no assignment for (" + g.track_id + ", phase " +
                      std::to_string(g.phase) + "); the corpus does not match the manifest");
    }
    std::vector<TrajectorySample>* dest = &out.train;
    if (it->second == "validation") dest = &out.validation;
    if (it->second == "test") dest = &out.test;
    dest->insert(dest->end(), g.samples.begin(), g.samples.end());
    out.manifest.push_back(GroupAssignment{g.track_id, g.phase, it->second});
  }
  if (out.manifest.size() != manifest.size()) {
    throw DataError("manifest lists " + std::to_string(manifest.size()) + " groups but the corpus yields " +
                    std::to_string(out.manifest.size()));
  }
  std::sort(out.manifest.begin(), out.manifest.end(), [](const auto& a, const auto& b) {
    return a.track_id != b.track_id ? a.track_id < b.track_id : a.phase < b.phase;
  });
  return out;
}

std::string serialize_manifest(const std::vector<GroupAssignment>& manifest) {
  std::string out;
  for (const GroupAssignment& a : manifest) {
    out += a.track_id;
    out += ' ';
    out += std::to_string(a.phase);
    out += ' ';
    out += a.split;
    out += '\n';
  }
  return out;
}

std::vector<GroupAssignment> parse_manifest(std::string_view text) {
  std::vector<GroupAssignment> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t s1 = line.find(' ');
    const std::size_t s2 = s1 == std::string_view::npos ? s1 : line.find(' ', s1 + 1);
    if (s2 == std::string_view::npos) {
      throw DataError("manifest line " + std::to_string(line_no) + ": expected 3 fields");
    }
    GroupAssignment a;
    a.track_id = std::string(line.substr(0, s1));
    a.phase = static_cast<int>(numio::parse_u64(line.substr(s1 + 1, s2 - s1 - 1), "phase"));
    a.split = std::string(line.substr(s2 + 1));
    if (a.split != "train" && a.split != "validation" && a.split != "test") {
      throw DataError("manifest line " + std::to_string(line_no) + ": unknown split '" + a.split +
                      "'");
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace pedfuse::data
