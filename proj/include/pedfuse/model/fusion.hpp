#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "pedfuse/data/pipeline.hpp"
#include "pedfuse/model/parameters.hpp"

namespace pedfuse::model {

/// Ten future pedestrian positions at 0.2 s spacing, pedestrian-centered
/// frame, ordered t+0.2 s ... t+2.0 s.
struct Forecast {
  std::array<Vec2, data::kFutureSteps> positions{};

  bool operator==(const Forecast&) const = default;
};

struct EncodeResult {
  nncore::LstmState final_state;
  std::vector<nncore::StepCache> caches;
};

/// Runs one encoder over a 5-step sequence from a zero initial state.
EncodeResult encode(std::span<const std::vector<double>> sequence,
                    const nncore::LstmParams& encoder);

/// Everything backward() needs from one forward pass.
struct ForwardCaches {
  std::vector<nncore::StepCache> ped, veh, head;        // 5 per active encoder
  std::vector<nncore::StepCache> decoder;               // 10
  std::vector<double> context;                          // concatenated final hiddens
  std::vector<std::vector<double>> decoder_hidden;      // projection inputs per step
};

/// Encodes the active streams, concatenates their final hidden states in
/// fixed order (pedestrian, vehicle, head), unrolls the decoder 10 steps from
/// a zero state with the context as its input at every step, and projects
/// each decoder hidden state to an (x, y) offset.
std::pair<Forecast, ForwardCaches> forward(const data::TrajectorySample& sample,
                                           const ModelParameters& params);

/// forward() without keeping caches.
Forecast predict(const data::TrajectorySample& sample, const ModelParameters& params);

/// Exact gradients for all parameters given the loss gradient w.r.t. every
/// forecast position. Adds into `acc`, which must be shaped like `params`.
void backward_accumulate(const std::array<Vec2, data::kFutureSteps>& d_forecast,
                         const ForwardCaches& caches, const ModelParameters& params,
                         ModelParameters& acc);

ModelParameters backward(const std::array<Vec2, data::kFutureSteps>& d_forecast,
                         const ForwardCaches& caches, const ModelParameters& params);

}  // namespace pedfuse::model
