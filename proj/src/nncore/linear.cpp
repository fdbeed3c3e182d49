#include "pedfuse/nncore/linear.hpp"

#include <stdexcept>
#include <string>

namespace pedfuse::nncore {

std::vector<double> linear_forward(std::span<const double> x, const Matrix& w,
                                   std::span<const double> b) {
  if (b.size() != w.rows()) {
    throw std::invalid_argument("linear_forward: bias has length " + std::to_string(b.size()) +
                                ", expected " + std::to_string(w.rows()));
  }
  std::vector<double> out(w.rows());
  matvec(w, x, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

LinearGrads linear_backward(std::span<const double> d_out, std::span<const double> x,
                            const Matrix& w) {
  if (d_out.size() != w.rows() || x.size() != w.cols()) {
    throw std::invalid_argument("linear_backward: gradient/input lengths " +
                                std::to_string(d_out.size()) + "/" + std::to_string(x.size()) +
                                " do not match weight " + std::to_string(w.rows()) + "x" +
                                std::to_string(w.cols()));
  }
  LinearGrads g;
  g.d_input.assign(w.cols(), 0.0);
  g.d_weight = Matrix(w.rows(), w.cols());
  g.d_bias.assign(d_out.begin(), d_out.end());
  matvec_transposed_add(w, d_out, g.d_input);
  add_outer(g.d_weight, d_out, x);
  return g;
}

}  // namespace pedfuse::nncore
