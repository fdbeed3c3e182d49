#include "pedfuse/train/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pedfuse/common/errors.hpp"

namespace pedfuse::train {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const TrainConfig& config) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
      params.size() != state.second_moment.size()) {
    throw std::invalid_argument("adam_step: parameter/gradient/state sizes disagree (" +
                                std::to_string(params.size()) + ", " +
                                std::to_string(grads.size()) + ", " +
                                std::to_string(state.first_moment.size()) + ")");
  }
  for (const double g : grads) {
    if (!std::isfinite(g)) throw NumericError("adam_step: non-finite gradient");
  }

  state.step += 1;
  const double m_correction = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double v_correction = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double m_hat = m / m_correction;
    const double v_hat = v / v_correction;
    params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace pedfuse::train
