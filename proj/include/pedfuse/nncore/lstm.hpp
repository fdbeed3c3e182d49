#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pedfuse/nncore/matrix.hpp"

namespace pedfuse::nncore {

// Gate order everywhere (memory layout, parameter flattening, checkpoints):
// input, forget, candidate, output.

/// Parameters of one LSTM cell. Each gate weight is
/// hidden_dim x (input_dim + hidden_dim) and acts on the joined vector
/// [x; h_prev]; each gate bias has length hidden_dim.
struct LstmParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix w_input, w_forget, w_candidate, w_output;
  std::vector<double> b_input, b_forget, b_candidate, b_output;

  static LstmParams zeros(std::size_t input_dim, std::size_t hidden_dim);

  /// 4 * hidden_dim * (input_dim + hidden_dim + 1)
  std::size_t parameter_count() const {
    return 4 * hidden_dim * (input_dim + hidden_dim + 1);
  }

  bool empty() const { return hidden_dim == 0; }

  bool operator==(const LstmParams&) const = default;
};

struct LstmState {
  std::vector<double> hidden;
  std::vector<double> cell;

  static LstmState zeros(std::size_t hidden_dim) {
    return {std::vector<double>(hidden_dim, 0.0), std::vector<double>(hidden_dim, 0.0)};
  }
};

/// Everything the backward pass needs from one forward step. Gate vectors are
/// post-activation values.
struct StepCache {
  std::vector<double> input;
  LstmState prev;
  std::vector<double> gate_input, gate_forget, gate_candidate, gate_output;
  std::vector<double> cell;
  std::vector<double> cell_tanh;
};

/// One forward step of the standard LSTM cell:
///   i,f,o = sigmoid(W [x;h] + b),  g = tanh(W [x;h] + b)
///   c' = f.c + i.g,  h' = o.tanh(c')
std::pair<LstmState, StepCache> lstm_step_forward(std::span<const double> x,
                                                  const LstmState& prev,
                                                  const LstmParams& p);

struct LstmStepGrads {
  std::vector<double> d_input;
  LstmState d_prev;
  LstmParams d_params;
};

/// Exact analytic gradients through one cached step. d_next carries the loss
/// gradient w.r.t. the step's output state (hidden and cell).
LstmStepGrads lstm_step_backward(const LstmState& d_next, const StepCache& cache,
                                 const LstmParams& p);

/// Accumulating form used by BPTT loops: adds the input gradient into
/// d_input_acc and the parameter gradients into d_params_acc; writes the
/// previous-state gradient to d_prev.
void lstm_step_backward_accumulate(const LstmState& d_next, const StepCache& cache,
                                   const LstmParams& p, std::span<double> d_input_acc,
                                   LstmState& d_prev, LstmParams& d_params_acc);

}  // namespace pedfuse::nncore
