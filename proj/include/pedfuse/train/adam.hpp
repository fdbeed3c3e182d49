#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pedfuse/train/config.hpp"

namespace pedfuse::train {

/// Per-parameter moment accumulators over the flattened parameter vector.
struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t size)
      : first_moment(size, 0.0), second_moment(size, 0.0) {}
};

/// One bias-corrected update, in place:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2;  t <- t+1
///   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
/// Throws NumericError on non-finite gradients, std::invalid_argument on
/// size mismatches. `config` must already satisfy validate().
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config);

}  // namespace pedfuse::train
