#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "canids/nn/layers.hpp"

namespace canids::nn {

struct GradCheckEntry {
  std::string param;
  std::size_t index;
  double analytic;
  double numeric;
  double rel_error;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::vector<GradCheckEntry> failures;  // entries above tolerance
  bool ok(double tolerance) const { return max_rel_error <= tolerance; }
};

// Central-difference check of analytic parameter gradients.
//
// `loss` must be a deterministic function of the parameter values (dropout
// off, fixed inputs). For each checked parameter element the loss is
// re-evaluated at +-h and compared against the gradient stored in
// param.grad by the caller's analytic backward pass.
//
// rel error = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
GradCheckReport grad_check(const std::function<double()>& loss,
                           std::span<ParamTensor<double>* const> params,
                           double h, double tolerance);

}  // namespace canids::nn
