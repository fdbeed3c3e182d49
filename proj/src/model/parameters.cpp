#include "pedfuse/model/parameters.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pedfuse/common/rng.hpp"

namespace pedfuse::model {

namespace {

// Canonical block order; salts index the per-block init streams.
enum BlockSalt : std::uint64_t {
  kPedSalt = 0,
  kVehSalt = 1,
  kHeadSalt = 2,
  kDecoderSalt = 3,
  kProjectionSalt = 4,
};

void fill_lstm(nncore::LstmParams& p, rng::Engine& eng) {
  const double bound = 1.0 / std::sqrt(double(p.input_dim + p.hidden_dim));
  for (nncore::Matrix* w : {&p.w_input, &p.w_forget, &p.w_candidate, &p.w_output}) {
    for (double& v : w->data()) v = eng.uniform(-bound, bound);
  }
}

template <class Params, class Fn>
void visit_flat(Params& params, Fn&& fn) {
  auto visit_lstm = [&](auto& p) {
    if (p.empty()) return;
    for (auto* w : {&p.w_input, &p.w_forget, &p.w_candidate, &p.w_output}) fn(w->data());
    for (auto* b : {&p.b_input, &p.b_forget, &p.b_candidate, &p.b_output})
      fn(std::span(b->data(), b->size()));
  };
  visit_lstm(params.ped_encoder);
  visit_lstm(params.veh_encoder);
  visit_lstm(params.head_encoder);
  visit_lstm(params.decoder);
  fn(params.projection_weight.data());
  fn(std::span(params.projection_bias.data(), params.projection_bias.size()));
}

}  // namespace

std::string method_name(CueConfig cues) {
  if (cues == kBaseline) return "baseline";
  if (cues == kMethod1) return "method1";
  if (cues == kMethod2) return "method2";
  return "head_only";
}

CueConfig cues_for_method(std::string_view name) {
  if (name == "baseline") return kBaseline;
  if (name == "method1") return kMethod1;
  if (name == "method2") return kMethod2;
  if (name == "head_only") return CueConfig{false, true};
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected baseline, method1, method2 or head_only)");
}

std::size_t ModelParameters::context_dim() const {
  return dims.ped_hidden + dims.veh_hidden + dims.head_hidden;
}

std::size_t ModelParameters::parameter_count() const {
  std::size_t n = ped_encoder.parameter_count() + veh_encoder.parameter_count() +
                  head_encoder.parameter_count() + decoder.parameter_count();
  return n + projection_weight.size() + projection_bias.size();
}

ModelParameters init_parameters(const ModelDims& dims, CueConfig cues, std::uint64_t seed) {
  if (dims.ped_hidden == 0 || dims.decoder_hidden == 0 ||
      (cues.use_vehicle && dims.veh_hidden == 0) || (cues.use_head && dims.head_hidden == 0)) {
    throw std::invalid_argument("init_parameters: active hidden dims must be positive");
  }
  ModelParameters m;
  m.cues = cues;
  m.init_seed = seed;
  m.dims = dims;
  if (!cues.use_vehicle) m.dims.veh_hidden = 0;
  if (!cues.use_head) m.dims.head_hidden = 0;

  m.ped_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.ped_hidden);
  m.veh_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.veh_hidden);
  m.head_encoder = nncore::LstmParams::zeros(kStreamInputDim, m.dims.head_hidden);
  m.decoder = nncore::LstmParams::zeros(m.context_dim(), m.dims.decoder_hidden);
  m.projection_weight = nncore::Matrix(kOutputDim, m.dims.decoder_hidden);
  m.projection_bias.assign(kOutputDim, 0.0);

  const auto block_engine = [&](std::uint64_t salt) {
    return rng::Engine(rng::derive_seed(seed, salt));
  };
  {
    rng::Engine eng = block_engine(kPedSalt);
    fill_lstm(m.ped_encoder, eng);
  }
  if (cues.use_vehicle) {
    rng::Engine eng = block_engine(kVehSalt);
    fill_lstm(m.veh_encoder, eng);
  }
  if (cues.use_head) {
    rng::Engine eng = block_engine(kHeadSalt);
    fill_lstm(m.head_encoder, eng);
  }
  {
    rng::Engine eng = block_engine(kDecoderSalt);
    fill_lstm(m.decoder, eng);
  }
  {
    rng::Engine eng = block_engine(kProjectionSalt);
    const double bound = 1.0 / std::sqrt(double(m.dims.decoder_hidden));
    for (double& v : m.projection_weight.data()) v = eng.uniform(-bound, bound);
  }
  return m;
}

ModelParameters zeros_like(const ModelParameters& like) {
  ModelParameters m;
  m.dims = like.dims;
  m.cues = like.cues;
  m.init_seed = like.init_seed;
  m.ped_encoder = nncore::LstmParams::zeros(like.ped_encoder.input_dim, like.ped_encoder.hidden_dim);
  m.veh_encoder = nncore::LstmParams::zeros(like.veh_encoder.input_dim, like.veh_encoder.hidden_dim);
  m.head_encoder =
      nncore::LstmParams::zeros(like.head_encoder.input_dim, like.head_encoder.hidden_dim);
  m.decoder = nncore::LstmParams::zeros(like.decoder.input_dim, like.decoder.hidden_dim);
  m.projection_weight = nncore::Matrix(like.projection_weight.rows(), like.projection_weight.cols());
  m.projection_bias.assign(like.projection_bias.size(), 0.0);
  return m;
}

std::vector<double> to_flat_vector(const ModelParameters& params) {
  std::vector<double> flat;
  flat.reserve(params.parameter_count());
  visit_flat(params, [&](std::span<const double> block) {
    flat.insert(flat.end(), block.begin(), block.end());
  });
  return flat;
}

void from_flat_vector(std::span<const double> flat, ModelParameters& params) {
  if (flat.size() != params.parameter_count()) {
    throw std::invalid_argument("from_flat_vector: got " + std::to_string(flat.size()) +
                                " values, expected " + std::to_string(params.parameter_count()));
  }
  std::size_t offset = 0;
  visit_flat(params, [&](std::span<double> block) {
    for (double& v : block) v = flat[offset++];
  });
}

void add_scaled(ModelParameters& acc, const ModelParameters& delta, double scale) {
  if (acc.parameter_count() != delta.parameter_count()) {
    throw std::invalid_argument("add_scaled: parameter shapes differ");
  }
  std::vector<std::span<const double>> sources;
  visit_flat(delta, [&](std::span<const double> block) { sources.push_back(block); });
  std::size_t i = 0;
  visit_flat(acc, [&](std::span<double> block) {
    const std::span<const double> src = sources[i++];
    for (std::size_t k = 0; k < block.size(); ++k) block[k] += scale * src[k];
  });
}

}  // namespace pedfuse::model
