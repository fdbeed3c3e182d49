#include "pedfuse/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pedfuse/common/errors.hpp"
#include "pedfuse/common/numio.hpp"
#include "pedfuse/common/rng.hpp"
#include "pedfuse/train/adam.hpp"
#include "pedfuse/train/loss.hpp"

namespace pedfuse::train {

namespace {

// Parameter blocks consume derived-seed salts 0-4 and the gradient-check
// probe uses 6; the shuffle stream gets its own slot.
constexpr std::uint64_t kShuffleSalt = 5;

// Throws plainly; the batch loop annotates with epoch/batch.
void clip_global_norm(std::vector<double>& grads, double max_norm) {
  double sq = 0.0;
  for (const double g : grads) sq += g * g;
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw NumericError("non-finite gradient norm");
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
}

}  // namespace

double mean_loss(const std::vector<data::TrajectorySample>& samples,
                 const model::ModelParameters& params) {
  if (samples.empty()) throw std::invalid_argument("mean_loss: empty sample set");
  double total = 0.0;
  for (const auto& sample : samples) {
    total += mse_loss(model::predict(sample, params), sample.ped_future).loss;
  }
  return total / static_cast<double>(samples.size());
}

TrainResult train(const data::DatasetSplit& dataset, const TrainConfig& config) {
  validate(config);
  if (dataset.train.empty()) throw std::invalid_argument("train: empty train split");
  if (dataset.validation.empty()) throw std::invalid_argument("train: empty validation split");

  model::ModelParameters params = model::init_parameters(config.dims, config.cues, config.seed);
  std::vector<double> flat = model::to_flat_vector(params);
  AdamState adam(flat.size());
  model::ModelParameters grads = model::zeros_like(params);
  const std::vector<double> flat_zeros(flat.size(), 0.0);
  const std::uint64_t shuffle_root = rng::derive_seed(config.seed, kShuffleSalt);

  TrainHistory history;
  model::ModelParameters best_params = params;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_improvement = 0;

  std::vector<std::size_t> order(dataset.train.size());
  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng::Engine shuffler(rng::derive_seed(shuffle_root, epoch));
    shuffler.shuffle(order);

    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(end - begin);
      try {
        for (std::size_t i = begin; i < end; ++i) {
          const data::TrajectorySample& sample = dataset.train[order[i]];
          const auto [forecast, caches] = model::forward(sample, params);
          auto [loss, d_positions] = mse_loss(forecast, sample.ped_future);
          if (!std::isfinite(loss)) throw NumericError("non-finite loss");
          epoch_loss += loss;
          // Pre-scaling the loss gradient makes the accumulator the batch
          // mean without a second pass.
          for (Vec2& d : d_positions) d = inv_batch * d;
          model::backward_accumulate(d_positions, caches, params, grads);
        }
        std::vector<double> flat_grads = model::to_flat_vector(grads);
        if (config.grad_clip_norm > 0.0) clip_global_norm(flat_grads, config.grad_clip_norm);
        adam_step(flat, flat_grads, adam, config);
      } catch (const NumericError& e) {
        throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index) + ": " + e.what());
      }
      model::from_flat_vector(flat, params);
      model::from_flat_vector(flat_zeros, grads);
    }

    const double train_loss = epoch_loss / static_cast<double>(order.size());
    const double validation_loss = mean_loss(dataset.validation, params);
    if (!std::isfinite(validation_loss)) {
      throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                         ": non-finite validation loss");
    }
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - epoch_start;
    history.epochs.push_back({train_loss, validation_loss, wall.count()});

    if (validation_loss < best_val) {
      best_val = validation_loss;
      history.best_epoch = epoch;
      best_params = params;
      since_improvement = 0;
    } else if (++since_improvement > config.patience) {
      break;
    }
  }
  return {std::move(best_params), std::move(history)};
}

std::string serialize_history(const TrainHistory& history) {
  std::string out = "# columns: epoch train_loss validation_loss wall_seconds\n";
  out += "# best_epoch " + std::to_string(history.best_epoch) + "\n";
  for (std::size_t e = 0; e < history.epochs.size(); ++e) {
    const EpochStats& s = history.epochs[e];
    out += std::to_string(e) + " " + numio::format_double(s.train_loss) + " " +
           numio::format_double(s.validation_loss) + " " + numio::format_double(s.wall_seconds) +
           "\n";
  }
  return out;
}

}  // namespace pedfuse::train
