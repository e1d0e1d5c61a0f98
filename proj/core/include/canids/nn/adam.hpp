#pragma once

#include <span>

#include "canids/nn/layers.hpp"

namespace canids::nn {

template <typename T>
struct AdamConfig {
  T learning_rate = static_cast<T>(1e-4);
  T beta1 = static_cast<T>(0.9);
  T beta2 = static_cast<T>(0.999);
  T epsilon = static_cast<T>(1e-8);
  T decay_factor = static_cast<T>(0.1);  // applied once, for epochs > decay_epoch
  int decay_epoch = 50;
};

// Learning rate in effect at `epoch` (1-based).
template <typename T>
T effective_learning_rate(const AdamConfig<T>& config, int epoch) {
  return epoch > config.decay_epoch
             ? config.learning_rate * config.decay_factor
             : config.learning_rate;
}

// Standard bias-corrected Adam update on one tensor. Throws NumericsError
// if the gradient contains non-finite values.
template <typename T>
void adam_step(ParamTensor<T>& param, const AdamConfig<T>& config, int epoch);

template <typename T>
void adam_step(std::span<ParamTensor<T>* const> params,
               const AdamConfig<T>& config, int epoch);

}  // namespace canids::nn
