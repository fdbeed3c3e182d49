#include "pedfuse/train/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"

namespace pedfuse::train {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

void validate(const TrainConfig& c) {
  // Negated comparisons so that NaN settings fail too.
  if (!(c.learning_rate > 0.0)) throw std::invalid_argument("train config: learning_rate must be positive");
  if (!(c.beta1 > 0.0 && c.beta1 < 1.0)) throw std::invalid_argument("train config: beta1 must lie in (0, 1)");
  if (!(c.beta2 > 0.0 && c.beta2 < 1.0)) throw std::invalid_argument("train config: beta2 must lie in (0, 1)");
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("train config: epsilon must be positive");
  if (c.batch_size < 1) throw std::invalid_argument("train config: batch_size must be at least 1");
  if (c.max_epochs < 1) throw std::invalid_argument("train config: max_epochs must be at least 1");
  if (!(c.grad_clip_norm >= 0.0)) throw std::invalid_argument("train config: grad_clip_norm must be nonnegative");
}

std::string serialize_config(const TrainConfig& c) {
  std::string out = "# pedfuse training configuration\n";
  out += "learning_rate=" + numio::format_double(c.learning_rate) + "\n";
  out += "beta1=" + numio::format_double(c.beta1) + "\n";
  out += "beta2=" + numio::format_double(c.beta2) + "\n";
  out += "epsilon=" + numio::format_double(c.epsilon) + "\n";
  out += "batch_size=" + std::to_string(c.batch_size) + "\n";
  out += "max_epochs=" + std::to_string(c.max_epochs) + "\n";
  out += "patience=" + std::to_string(c.patience) + "\n";
  out += "grad_clip_norm=" + numio::format_double(c.grad_clip_norm) + "\n";
  out += "seed=" + std::to_string(c.seed) + "\n";
  out += "cues=" + model::method_name(c.cues) + "\n";
  out += "ped_hidden=" + std::to_string(c.dims.ped_hidden) + "\n";
  out += "veh_hidden=" + std::to_string(c.dims.veh_hidden) + "\n";
  out += "head_hidden=" + std::to_string(c.dims.head_hidden) + "\n";
  out += "decoder_hidden=" + std::to_string(c.dims.decoder_hidden) + "\n";
  return out;
}

TrainConfig parse_config(std::string_view text) {
  TrainConfig c;
  std::vector<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "config line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw DataError(where + ": expected key=value, got '" + std::string(line) + "'");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw DataError(where + ": repeated key '" + key + "'");
    }
    seen.push_back(key);
    if (key == "learning_rate") {
      c.learning_rate = numio::parse_double(value, "learning_rate");
    } else if (key == "beta1") {
      c.beta1 = numio::parse_double(value, "beta1");
    } else if (key == "beta2") {
      c.beta2 = numio::parse_double(value, "beta2");
    } else if (key == "epsilon") {
      c.epsilon = numio::parse_double(value, "epsilon");
    } else if (key == "batch_size") {
      c.batch_size = numio::parse_u64(value, "batch_size");
    } else if (key == "max_epochs") {
      c.max_epochs = numio::parse_u64(value, "max_epochs");
    } else if (key == "patience") {
      c.patience = numio::parse_u64(value, "patience");
    } else if (key == "grad_clip_norm") {
      c.grad_clip_norm = numio::parse_double(value, "grad_clip_norm");
    } else if (key == "seed") {
      c.seed = numio::parse_u64(value, "seed");
    } else if (key == "cues") {
      try {
        c.cues = model::cues_for_method(value);
      } catch (const std::invalid_argument&) {
        throw DataError(where + ": unknown cue configuration '" + std::string(value) + "'");
      }
    } else if (key == "ped_hidden") {
      c.dims.ped_hidden = numio::parse_u64(value, "ped_hidden");
    } else if (key == "veh_hidden") {
      c.dims.veh_hidden = numio::parse_u64(value, "veh_hidden");
    } else if (key == "head_hidden") {
      c.dims.head_hidden = numio::parse_u64(value, "head_hidden");
    } else if (key == "decoder_hidden") {
      c.dims.decoder_hidden = numio::parse_u64(value, "decoder_hidden");
    } else {
      throw DataError(where + ": unknown key '" + key + "'");
    }
  }
  return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("could not open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_config(const TrainConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("could not open " + path.string() + " for writing");
  out << serialize_config(config);
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace pedfuse::train
