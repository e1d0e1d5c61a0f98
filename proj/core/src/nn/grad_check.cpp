#include "canids/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace canids::nn {

GradCheckReport grad_check(const std::function<double()>& loss,
                           std::span<ParamTensor<double>* const> params,
                           double h, double tolerance) {
  GradCheckReport report;
  for (ParamTensor<double>* param : params) {
    for (std::size_t i = 0; i < param->size(); ++i) {
      const double saved = param->value[i];
      param->value[i] = saved + h;
      const double up = loss();
      param->value[i] = saved - h;
      const double down = loss();
      param->value[i] = saved;

      const double numeric = (up - down) / (2.0 * h);
      const double analytic = param->grad[i];
      const double denom =
          std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      report.max_rel_error = std::max(report.max_rel_error, rel);
      if (rel > tolerance) {
        report.failures.push_back({param->name, i, analytic, numeric, rel});
      }
    }
  }
  return report;
}

}  // namespace canids::nn
