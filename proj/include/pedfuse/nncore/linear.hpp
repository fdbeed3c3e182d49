#pragma once

#include <span>
#include <vector>

#include "pedfuse/nncore/matrix.hpp"

namespace pedfuse::nncore {

/// w * x + b
std::vector<double> linear_forward(std::span<const double> x, const Matrix& w,
                                   std::span<const double> b);

struct LinearGrads {
  std::vector<double> d_input;
  Matrix d_weight;
  std::vector<double> d_bias;
};

LinearGrads linear_backward(std::span<const double> d_out, std::span<const double> x,
                            const Matrix& w);

}  // namespace pedfuse::nncore
