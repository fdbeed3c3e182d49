#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pedfuse/model/cue_config.hpp"
#include "pedfuse/nncore/lstm.hpp"

namespace pedfuse::model {

/// Hidden sizes. Encoder entries for disabled cues are ignored at
/// construction and stored as zero, matching the absent parameter blocks.
struct ModelDims {
  std::size_t ped_hidden = 64;
  std::size_t veh_hidden = 64;
  std::size_t head_hidden = 64;
  std::size_t decoder_hidden = 128;

  bool operator==(const ModelDims&) const = default;
};

/// Full parameter set of the fusion forecaster. Encoders read 2-dim steps
/// (positions, or (cos, sin) of the head angle); the decoder reads the
/// concatenated final encoder hidden states; a linear projection maps each
/// decoder hidden state to an (x, y) offset. Disabled encoders are absent
/// (empty parameter blocks), not zero-masked.
struct ModelParameters {
  ModelDims dims;
  CueConfig cues;
  std::uint64_t init_seed = 0;
  nncore::LstmParams ped_encoder;
  nncore::LstmParams veh_encoder;
  nncore::LstmParams head_encoder;
  nncore::LstmParams decoder;
  nncore::Matrix projection_weight;     // 2 x decoder_hidden
  std::vector<double> projection_bias;  // length 2

  std::size_t context_dim() const;
  std::size_t parameter_count() const;

  bool operator==(const ModelParameters&) const = default;
};

inline constexpr std::size_t kStreamInputDim = 2;
inline constexpr std::size_t kOutputDim = 2;

/// Deterministic initialization: every weight is uniform on
/// (-1/sqrt(fan_in), +1/sqrt(fan_in)) with fan_in = the block's input width;
/// biases are zero. Each block (pedestrian, vehicle, head, decoder,
/// projection) draws from its own seed-derived stream, so encoders shared
/// between cue configurations start from bit-identical weights.
ModelParameters init_parameters(const ModelDims& dims, CueConfig cues, std::uint64_t seed);

/// Same shapes as `like`, every value zero. Gradient accumulator shape.
ModelParameters zeros_like(const ModelParameters& like);

// Canonical flattening: pedestrian, vehicle, head, decoder blocks (absent
// blocks skipped), then projection weight row-major, then projection bias.
// Within an LSTM block: w_input, w_forget, w_candidate, w_output row-major,
// then the biases in the same gate order.
std::vector<double> to_flat_vector(const ModelParameters& params);
void from_flat_vector(std::span<const double> flat, ModelParameters& params);

// Element-wise helpers over the same flattening (used by the optimizer).
void add_scaled(ModelParameters& acc, const ModelParameters& delta, double scale);

}  // namespace pedfuse::model
