#include "pedfuse/model/fusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/nncore/linear.hpp"
#include "pedfuse/nncore/matrix.hpp"

namespace pedfuse::model {

namespace {

std::vector<std::vector<double>> stream_of_positions(std::span<const Vec2> points) {
  std::vector<std::vector<double>> seq;
  seq.reserve(points.size());
  for (const Vec2& p : points) seq.push_back({p.x, p.y});
  return seq;
}

std::vector<std::vector<double>> stream_of_angles(std::span<const double> thetas) {
  std::vector<std::vector<double>> seq;
  seq.reserve(thetas.size());
  for (double theta : thetas) seq.push_back({std::cos(theta), std::sin(theta)});
  return seq;
}

void check_caches(const ForwardCaches& caches, const ModelParameters& params) {
  const bool ok = caches.ped.size() == data::kPastSteps &&
                  caches.veh.size() == (params.cues.use_vehicle ? data::kPastSteps : 0) &&
                  caches.head.size() == (params.cues.use_head ? data::kPastSteps : 0) &&
                  caches.decoder.size() == data::kFutureSteps &&
                  caches.context.size() == params.context_dim() &&
                  caches.decoder_hidden.size() == data::kFutureSteps;
  if (!ok) throw std::invalid_argument("backward: caches do not match the parameter shapes");
}

}  // namespace

EncodeResult encode(std::span<const std::vector<double>> sequence,
                    const nncore::LstmParams& encoder) {
  if (sequence.size() != data::kPastSteps) {
    throw std::invalid_argument("encode: sequence has " + std::to_string(sequence.size()) +
                                " steps, expected " + std::to_string(data::kPastSteps));
  }
  EncodeResult r;
  r.final_state = nncore::LstmState::zeros(encoder.hidden_dim);
  r.caches.reserve(sequence.size());
  for (const std::vector<double>& x : sequence) {
    auto [next, cache] = nncore::lstm_step_forward(x, r.final_state, encoder);
    r.final_state = std::move(next);
    r.caches.push_back(std::move(cache));
  }
  return r;
}

std::pair<Forecast, ForwardCaches> forward(const data::TrajectorySample& sample,
                                           const ModelParameters& params) {
  ForwardCaches caches;

  EncodeResult ped = encode(stream_of_positions(sample.ped_past), params.ped_encoder);
  caches.ped = std::move(ped.caches);
  caches.context = std::move(ped.final_state.hidden);

  if (params.cues.use_vehicle) {
    EncodeResult veh = encode(stream_of_positions(sample.veh_past), params.veh_encoder);
    caches.veh = std::move(veh.caches);
    caches.context.insert(caches.context.end(), veh.final_state.hidden.begin(),
                          veh.final_state.hidden.end());
  }
  if (params.cues.use_head) {
    EncodeResult head = encode(stream_of_angles(sample.head_theta), params.head_encoder);
    caches.head = std::move(head.caches);
    caches.context.insert(caches.context.end(), head.final_state.hidden.begin(),
                          head.final_state.hidden.end());
  }

  Forecast forecast;
  nncore::LstmState state = nncore::LstmState::zeros(params.decoder.hidden_dim);
  for (std::size_t t = 0; t < data::kFutureSteps; ++t) {
    auto [next, cache] = nncore::lstm_step_forward(caches.context, state, params.decoder);
    state = std::move(next);
    caches.decoder.push_back(std::move(cache));
    caches.decoder_hidden.push_back(state.hidden);
    const std::vector<double> out =
        nncore::linear_forward(state.hidden, params.projection_weight, params.projection_bias);
    if (!std::isfinite(out[0]) || !std::isfinite(out[1])) {
      throw NumericError("forward: non-finite forecast position at step " + std::to_string(t));
    }
    forecast.positions[t] = {out[0], out[1]};
  }
  return {forecast, std::move(caches)};
}

Forecast predict(const data::TrajectorySample& sample, const ModelParameters& params) {
  return forward(sample, params).first;
}

void backward_accumulate(const std::array<Vec2, data::kFutureSteps>& d_forecast,
                         const ForwardCaches& caches, const ModelParameters& params,
                         ModelParameters& acc) {
  check_caches(caches, params);

  // Decoder chain, newest step first. The same context vector feeds every
  // step, so its gradient accumulates across all of them.
  std::vector<double> d_context(params.context_dim(), 0.0);
  nncore::LstmState d_state = nncore::LstmState::zeros(params.decoder.hidden_dim);
  for (std::size_t t = data::kFutureSteps; t-- > 0;) {
    const std::vector<double> d_out = {d_forecast[t].x, d_forecast[t].y};
    nncore::add_outer(acc.projection_weight, d_out, caches.decoder_hidden[t]);
    acc.projection_bias[0] += d_out[0];
    acc.projection_bias[1] += d_out[1];
    nncore::matvec_transposed_add(params.projection_weight, d_out, d_state.hidden);

    nncore::LstmState d_prev;
    nncore::lstm_step_backward_accumulate(d_state, caches.decoder[t], params.decoder, d_context,
                                          d_prev, acc.decoder);
    d_state = std::move(d_prev);
  }

  // Split the context gradient back into the encoders' final hidden states.
  std::size_t offset = 0;
  const auto run_encoder = [&](const nncore::LstmParams& enc,
                               const std::vector<nncore::StepCache>& enc_caches,
                               nncore::LstmParams& enc_acc) {
    nncore::LstmState d_enc = nncore::LstmState::zeros(enc.hidden_dim);
    for (std::size_t i = 0; i < enc.hidden_dim; ++i) d_enc.hidden[i] = d_context[offset + i];
    offset += enc.hidden_dim;
    std::vector<double> d_x(enc.input_dim);
    for (std::size_t t = data::kPastSteps; t-- > 0;) {
      std::fill(d_x.begin(), d_x.end(), 0.0);
      nncore::LstmState d_prev;
      nncore::lstm_step_backward_accumulate(d_enc, enc_caches[t], enc, d_x, d_prev, enc_acc);
      d_enc = std::move(d_prev);
    }
  };
  run_encoder(params.ped_encoder, caches.ped, acc.ped_encoder);
  if (params.cues.use_vehicle) run_encoder(params.veh_encoder, caches.veh, acc.veh_encoder);
  if (params.cues.use_head) run_encoder(params.head_encoder, caches.head, acc.head_encoder);
}

ModelParameters backward(const std::array<Vec2, data::kFutureSteps>& d_forecast,
                         const ForwardCaches& caches, const ModelParameters& params) {
  ModelParameters acc = zeros_like(params);
  backward_accumulate(d_forecast, caches, params, acc);
  return acc;
}

}  // namespace pedfuse::model
