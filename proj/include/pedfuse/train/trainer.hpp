#pragma once

#include <string>
#include <vector>

#include "pedfuse/data/split.hpp"
#include "pedfuse/train/config.hpp"

namespace pedfuse::train {

struct EpochStats {
  double train_loss = 0.0;       // mean per-sample loss seen during the epoch
  double validation_loss = 0.0;  // mean loss over the validation split
  double wall_seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // first epoch attaining the minimal validation loss
};

struct TrainResult {
  model::ModelParameters parameters;  // snapshot taken at the best epoch
  TrainHistory history;
};

/// The full loop: seeded initialization, per-epoch reshuffling of the train
/// samples, batch-mean gradients, optional global-norm clipping, one Adam
/// step per batch, and a per-epoch validation pass. Stops once the
/// validation loss has failed to improve for more than `patience`
/// consecutive epochs (patience 0: the first non-improving epoch stops).
/// Divergence raises NumericError with an epoch/batch diagnostic.
TrainResult train(const data::DatasetSplit& dataset, const TrainConfig& config);

/// Mean per-sample MSE of `params` over a nonempty sample set.
double mean_loss(const std::vector<data::TrajectorySample>& samples,
                 const model::ModelParameters& params);

// History text: commented column documentation, one row per epoch.
std::string serialize_history(const TrainHistory& history);

}  // namespace pedfuse::train
