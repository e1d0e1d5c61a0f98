#include "canids/nn/adam.hpp"

#include <cmath>

#include "canids/errors.hpp"

namespace canids::nn {

template <typename T>
void adam_step(ParamTensor<T>& param, const AdamConfig<T>& config, int epoch) {
  if (!param.grad.all_finite()) {
    throw NumericsError("non-finite gradient in " + param.name);
  }
  const T lr = effective_learning_rate(config, epoch);
  param.step += 1;
  const T bc1 =
      T(1) - static_cast<T>(std::pow(config.beta1, static_cast<T>(param.step)));
  const T bc2 =
      T(1) - static_cast<T>(std::pow(config.beta2, static_cast<T>(param.step)));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const T g = param.grad[i];
    param.m[i] = config.beta1 * param.m[i] + (T(1) - config.beta1) * g;
    param.v[i] = config.beta2 * param.v[i] + (T(1) - config.beta2) * g * g;
    const T m_hat = param.m[i] / bc1;
    const T v_hat = param.v[i] / bc2;
    param.value[i] -= lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

template <typename T>
void adam_step(std::span<ParamTensor<T>* const> params,
               const AdamConfig<T>& config, int epoch) {
  for (ParamTensor<T>* p : params) adam_step(*p, config, epoch);
}

template void adam_step<float>(ParamTensor<float>&, const AdamConfig<float>&,
                               int);
template void adam_step<double>(ParamTensor<double>&,
                                const AdamConfig<double>&, int);
template void adam_step<float>(std::span<ParamTensor<float>* const>,
                               const AdamConfig<float>&, int);
template void adam_step<double>(std::span<ParamTensor<double>* const>,
                                const AdamConfig<double>&, int);

}  // namespace canids::nn
