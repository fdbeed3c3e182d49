#pragma once

#include <array>
#include <cstdint>

#include "pedfuse/model/fusion.hpp"

namespace pedfuse::train {

struct MseResult {
  double loss = 0.0;
  std::array<Vec2, data::kFutureSteps> d_positions{};  // dL/d(pred)
};

/// Mean squared error over all 20 scalar components of the ten predicted
/// offsets; the gradient is 2 (pred - target) / 20. The fixed-size types
/// make shape mismatches unrepresentable.
MseResult mse_loss(const model::Forecast& pred,
                   const std::array<Vec2, data::kFutureSteps>& target);

/// Verifies the analytic gradient of the per-sample loss against central
/// finite differences (step 1e-5) for every parameter of a freshly seeded
/// model on one randomized sample; returns the max relative error. Drives
/// the `gradcheck` command.
double model_gradient_check(const model::ModelDims& dims, model::CueConfig cues,
                            std::uint64_t seed);

}  // namespace pedfuse::train
