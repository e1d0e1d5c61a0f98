#pragma once

#include <string>
#include <vector>

#include "canids/nn/layers.hpp"

namespace canids::nn {

// Two-hidden-layer ReLU MLP scoring a latent batch, used as a WGAN critic.
// Output is sigmoid-squashed by default; `linear_output` switches to a raw
// score. Supports an analytic double-backward for the gradient penalty
// (the topology is fixed, so the second derivative is hand-derived rather
// than taped).
template <typename T>
class MlpCritic {
 public:
  MlpCritic() = default;
  MlpCritic(const std::string& name, std::size_t input_dim,
            std::size_t hidden_dim, bool linear_output = false);

  void init(Rng& rng);

  // [B,input_dim] -> [B,1]; caches activations for backward().
  Tensor<T> forward(const Tensor<T>& x);
  // Backprop of dL/d(score); accumulates parameter grads, returns dL/dx.
  // Must follow the matching forward().
  Tensor<T> backward(const Tensor<T>& dy);
  // As backward() but leaves parameter grads untouched (frozen critic).
  Tensor<T> input_gradient_of_score(const Tensor<T>& dy) const;

  // d(score_b)/d(x_b) for every sample, as a [B,input_dim] tensor.
  Tensor<T> input_gradient(const Tensor<T>& x) const;

  // Gradient penalty  coeff * mean_b (|| d D(x_b)/d x_b || - 1)^2
  // evaluated at x (the interpolated batch). Accumulates the penalty's
  // parameter gradient into the layer grads and returns the weighted value.
  T gradient_penalty(const Tensor<T>& x, T coeff);

  std::vector<ParamTensor<T>*> params();
  std::vector<const ParamTensor<T>*> params() const;
  std::size_t param_count() const;
  void zero_grad();

  std::size_t input_dim() const { return l1.in_dim; }
  bool linear_output() const { return linear_output_; }

  Dense<T> l1, l2, l3;

 private:
  struct GpForward;
  void run_gp_forward(const Tensor<T>& x, GpForward& f) const;

  Relu<T> relu1_, relu2_;
  Sigmoid<T> out_sigmoid_;
  bool linear_output_ = false;
};

}  // namespace canids::nn
