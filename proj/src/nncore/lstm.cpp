#include "pedfuse/nncore/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pedfuse/common/errors.hpp"

namespace pedfuse::nncore {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string("non-finite value in ") + what);
  }
}

}  // namespace

LstmParams LstmParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  const std::size_t z = input_dim + hidden_dim;
  p.w_input = Matrix(hidden_dim, z);
  p.w_forget = Matrix(hidden_dim, z);
  p.w_candidate = Matrix(hidden_dim, z);
  p.w_output = Matrix(hidden_dim, z);
  p.b_input.assign(hidden_dim, 0.0);
  p.b_forget.assign(hidden_dim, 0.0);
  p.b_candidate.assign(hidden_dim, 0.0);
  p.b_output.assign(hidden_dim, 0.0);
  return p;
}

std::pair<LstmState, StepCache> lstm_step_forward(std::span<const double> x,
                                                  const LstmState& prev, const LstmParams& p) {
  if (x.size() != p.input_dim) {
    throw std::invalid_argument("lstm_step_forward: input has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(p.input_dim));
  }
  if (prev.hidden.size() != p.hidden_dim || prev.cell.size() != p.hidden_dim) {
    throw std::invalid_argument("lstm_step_forward: state has hidden/cell lengths " +
                                std::to_string(prev.hidden.size()) + "/" +
                                std::to_string(prev.cell.size()) + ", expected " +
                                std::to_string(p.hidden_dim));
  }
  require_finite(x, "lstm input");

  const std::size_t h = p.hidden_dim;
  StepCache cache;
  cache.input.assign(x.begin(), x.end());
  cache.prev = prev;
  cache.gate_input.resize(h);
  cache.gate_forget.resize(h);
  cache.gate_candidate.resize(h);
  cache.gate_output.resize(h);
  cache.cell.resize(h);
  cache.cell_tanh.resize(h);

  // z = [x; h_prev]
  std::vector<double> z;
  z.reserve(p.input_dim + h);
  z.insert(z.end(), x.begin(), x.end());
  z.insert(z.end(), prev.hidden.begin(), prev.hidden.end());

  std::vector<double> pre(h);
  LstmState next;
  next.hidden.resize(h);
  next.cell.resize(h);

  matvec(p.w_input, z, pre);
  for (std::size_t i = 0; i < h; ++i) cache.gate_input[i] = sigmoid(pre[i] + p.b_input[i]);
  matvec(p.w_forget, z, pre);
  for (std::size_t i = 0; i < h; ++i) cache.gate_forget[i] = sigmoid(pre[i] + p.b_forget[i]);
  matvec(p.w_candidate, z, pre);
  for (std::size_t i = 0; i < h; ++i) cache.gate_candidate[i] = std::tanh(pre[i] + p.b_candidate[i]);
  matvec(p.w_output, z, pre);
  for (std::size_t i = 0; i < h; ++i) cache.gate_output[i] = sigmoid(pre[i] + p.b_output[i]);

  for (std::size_t i = 0; i < h; ++i) {
    cache.cell[i] = cache.gate_forget[i] * prev.cell[i] + cache.gate_input[i] * cache.gate_candidate[i];
    cache.cell_tanh[i] = std::tanh(cache.cell[i]);
    next.cell[i] = cache.cell[i];
    next.hidden[i] = cache.gate_output[i] * cache.cell_tanh[i];
  }
  return {std::move(next), std::move(cache)};
}

void lstm_step_backward_accumulate(const LstmState& d_next, const StepCache& cache,
                                   const LstmParams& p, std::span<double> d_input_acc,
                                   LstmState& d_prev, LstmParams& d_params_acc) {
  const std::size_t h = p.hidden_dim;
  if (d_next.hidden.size() != h || d_next.cell.size() != h) {
    throw std::invalid_argument("lstm_step_backward: gradient state has lengths " +
                                std::to_string(d_next.hidden.size()) + "/" +
                                std::to_string(d_next.cell.size()) + ", expected " +
                                std::to_string(h));
  }
  if (d_input_acc.size() != p.input_dim) {
    throw std::invalid_argument("lstm_step_backward: input gradient has length " +
                                std::to_string(d_input_acc.size()) + ", expected " +
                                std::to_string(p.input_dim));
  }

  std::vector<double> z;
  z.reserve(p.input_dim + h);
  z.insert(z.end(), cache.input.begin(), cache.input.end());
  z.insert(z.end(), cache.prev.hidden.begin(), cache.prev.hidden.end());

  d_prev.hidden.assign(h, 0.0);
  d_prev.cell.assign(h, 0.0);

  std::vector<double> da_input(h), da_forget(h), da_candidate(h), da_output(h);
  for (std::size_t i = 0; i < h; ++i) {
    const double dh = d_next.hidden[i];
    const double o = cache.gate_output[i];
    const double ct = cache.cell_tanh[i];
    const double d_o = dh * ct;
    const double d_c = d_next.cell[i] + dh * o * (1.0 - ct * ct);
    const double d_f = d_c * cache.prev.cell[i];
    const double d_i = d_c * cache.gate_candidate[i];
    const double d_g = d_c * cache.gate_input[i];
    d_prev.cell[i] = d_c * cache.gate_forget[i];

    const double gi = cache.gate_input[i];
    const double gf = cache.gate_forget[i];
    const double gg = cache.gate_candidate[i];
    da_input[i] = d_i * gi * (1.0 - gi);
    da_forget[i] = d_f * gf * (1.0 - gf);
    da_candidate[i] = d_g * (1.0 - gg * gg);
    da_output[i] = d_o * o * (1.0 - o);
  }

  add_outer(d_params_acc.w_input, da_input, z);
  add_outer(d_params_acc.w_forget, da_forget, z);
  add_outer(d_params_acc.w_candidate, da_candidate, z);
  add_outer(d_params_acc.w_output, da_output, z);
  for (std::size_t i = 0; i < h; ++i) {
    d_params_acc.b_input[i] += da_input[i];
    d_params_acc.b_forget[i] += da_forget[i];
    d_params_acc.b_candidate[i] += da_candidate[i];
    d_params_acc.b_output[i] += da_output[i];
  }

  std::vector<double> dz(p.input_dim + h, 0.0);
  matvec_transposed_add(p.w_input, da_input, dz);
  matvec_transposed_add(p.w_forget, da_forget, dz);
  matvec_transposed_add(p.w_candidate, da_candidate, dz);
  matvec_transposed_add(p.w_output, da_output, dz);
  for (std::size_t j = 0; j < p.input_dim; ++j) d_input_acc[j] += dz[j];
  for (std::size_t i = 0; i < h; ++i) d_prev.hidden[i] = dz[p.input_dim + i];
}

LstmStepGrads lstm_step_backward(const LstmState& d_next, const StepCache& cache,
                                 const LstmParams& p) {
  LstmStepGrads g;
  g.d_input.assign(p.input_dim, 0.0);
  g.d_params = LstmParams::zeros(p.input_dim, p.hidden_dim);
  lstm_step_backward_accumulate(d_next, cache, p, g.d_input, g.d_prev, g.d_params);
  return g;
}

}  // namespace pedfuse::nncore
