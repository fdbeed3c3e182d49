#include "pedfuse/model/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <string_view>
#include <vector>

#include "pedfuse/common/binary_io.hpp"
#include "pedfuse/common/errors.hpp"

namespace pedfuse::model {

namespace {
constexpr char kMagic[9] = "PFCHKPT1";
}

void save_checkpoint(const std::filesystem::path& path, const ModelParameters& params) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("could not open " + path.string() + " for writing");
  os.write(kMagic, 8);
  bio::write_u32(os, 1);
  bio::write_u8(os, params.cues.use_vehicle ? 1 : 0);
  bio::write_u8(os, params.cues.use_head ? 1 : 0);
  bio::write_u16(os, 0);
  bio::write_u32(os, static_cast<std::uint32_t>(params.dims.ped_hidden));
  bio::write_u32(os, static_cast<std::uint32_t>(params.dims.veh_hidden));
  bio::write_u32(os, static_cast<std::uint32_t>(params.dims.head_hidden));
  bio::write_u32(os, static_cast<std::uint32_t>(params.dims.decoder_hidden));
  bio::write_u64(os, params.init_seed);
  for (double v : to_flat_vector(params)) bio::write_f64(os, v);
  if (!os) throw IoError("failed while writing " + path.string());
}

ModelParameters load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("could not open checkpoint " + path.string());
  char magic[8];
  is.read(magic, 8);
  if (is.gcount() != 8 || std::string_view(magic, 8) != std::string_view(kMagic, 8)) {
    throw DataError(path.string() + ": not a checkpoint (bad magic)");
  }
  const std::uint32_t version = bio::read_u32(is);
  if (version != 1) {
    throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  ModelParameters m;
  m.cues.use_vehicle = bio::read_u8(is) != 0;
  m.cues.use_head = bio::read_u8(is) != 0;
  bio::read_u16(is);  // reserved
  m.dims.ped_hidden = bio::read_u32(is);
  m.dims.veh_hidden = bio::read_u32(is);
  m.dims.head_hidden = bio::read_u32(is);
  m.dims.decoder_hidden = bio::read_u32(is);
  m.init_seed = bio::read_u64(is);

  const bool dims_consistent = m.dims.ped_hidden > 0 && m.dims.decoder_hidden > 0 &&
                               (m.dims.veh_hidden > 0) == m.cues.use_vehicle &&
                               (m.dims.head_hidden > 0) == m.cues.use_head;
  if (!dims_consistent) {
    throw DataError(path.string() + ": corrupt checkpoint (dims inconsistent with cue flags)");
  }

  m.ped_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.ped_hidden);
  m.veh_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.veh_hidden);
  m.head_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.head_hidden);
  m.decoder = nncore::LstmParams::zeros(m.context_dim(), m.dims.decoder_hidden);
  m.projection_weight = nncore::Matrix(kOutputDim, m.dims.decoder_hidden);
  m.projection_bias.assign(kOutputDim, 0.0);

  std::vector<double> flat(m.parameter_count());
  for (double& v : flat) {
    v = bio::read_f64(is);
    if (!std::isfinite(v)) throw DataError(path.string() + ": non-finite parameter value");
  }
  if (is.get() != std::char_traits<char>::eof()) {
    throw DataError(path.string() + ": trailing bytes after parameters");
  }
  from_flat_vector(flat, m);
  return m;
}

}  // namespace pedfuse::model
