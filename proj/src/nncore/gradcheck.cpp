#include "pedfuse/nncore/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pedfuse/common/errors.hpp"

namespace pedfuse::nncore {

namespace {

double checked(double v) {
  if (!std::isfinite(v)) throw NumericError("gradient_check: value_fn returned non-finite loss");
  return v;
}

}  // namespace

double gradient_check(const std::function<double(std::span<const double>)>& value_fn,
                      std::span<const double> analytic_grad, std::span<const double> params,
                      double step) {
  if (analytic_grad.size() != params.size()) {
    throw std::invalid_argument("gradient_check: gradient and parameter lengths differ");
  }
  std::vector<double> scratch(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < scratch.size(); ++i) {
    const double saved = scratch[i];
    scratch[i] = saved + step;
    const double plus = checked(value_fn(scratch));
    scratch[i] = saved - step;
    const double minus = checked(value_fn(scratch));
    scratch[i] = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    const double denom = std::max({std::abs(analytic_grad[i]), std::abs(numeric), 1e-12});
    worst = std::max(worst, std::abs(analytic_grad[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace pedfuse::nncore
