#pragma once

#include <functional>
#include <span>

namespace pedfuse::nncore {

/// Central-finite-difference verification of an analytic gradient.
///
/// Returns max over coordinates of
///   |analytic - numeric| / max(|analytic|, |numeric|, 1e-12)
/// where numeric = (f(p + h e_k) - f(p - h e_k)) / 2h.
///
/// value_fn must be deterministic; a non-finite loss raises NumericError.
double gradient_check(const std::function<double(std::span<const double>)>& value_fn,
                      std::span<const double> analytic_grad,
                      std::span<const double> params, double step);

}  // namespace pedfuse::nncore
