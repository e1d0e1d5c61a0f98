#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "canids/nn/rng.hpp"
#include "canids/nn/tensor.hpp"

namespace canids::nn {

// One trainable tensor with its gradient and Adam state.
template <typename T>
struct ParamTensor {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
  Tensor<T> m;
  Tensor<T> v;
  std::int64_t step = 0;

  ParamTensor() = default;
  ParamTensor(std::string param_name, std::vector<std::size_t> shape)
      : name(std::move(param_name)),
        value(shape),
        grad(shape),
        m(shape),
        v(std::move(shape)) {}

  void zero_grad() { grad.zero(); }
  std::size_t size() const { return value.size(); }
};

// Uniform Kaiming-style fan-in init: U[-sqrt(6/fan_in), sqrt(6/fan_in)].
template <typename T>
void init_kaiming_uniform(Tensor<T>& w, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  for (auto& x : w.values()) {
    x = static_cast<T>(rng.uniform(-bound, bound));
  }
}

// Affine map y = x W + b with W[in,out]. Caches the input for backward.
template <typename T>
class Dense {
 public:
  Dense() = default;
  Dense(std::string name, std::size_t in, std::size_t out);

  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);
  // Accumulates weight/bias gradients, returns dL/dx.
  Tensor<T> backward(const Tensor<T>& dy);
  // dL/dx without touching parameter gradients (for frozen-critic paths).
  Tensor<T> input_gradient(const Tensor<T>& dy) const;

  ParamTensor<T> weight;
  ParamTensor<T> bias;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;

 private:
  Tensor<T> cached_x_;
};

// 3x3 "same" cross-correlation, stride 1. Weight layout [K,C,3,3].
template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels);

  void init(Rng& rng);
  Tensor<T> forward(const Tensor<T>& x);  // [N,C,H,W] -> [N,K,H,W]
  Tensor<T> backward(const Tensor<T>& dy);

  ParamTensor<T> weight;
  ParamTensor<T> bias;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;

 private:
  Tensor<T> cached_x_;
};

// 2x2 max pooling; requires even H and W. Gradient routes to the argmax
// (first maximum in scan order on ties).
template <typename T>
class MaxPool2x2 {
 public:
  Tensor<T> forward(const Tensor<T>& x);  // [N,C,H,W] -> [N,C,H/2,W/2]
  Tensor<T> backward(const Tensor<T>& dy);

 private:
  std::vector<std::size_t> argmax_;
  std::vector<std::size_t> in_shape_;
};

// Nearest-neighbour 2x upsampling; backward sums each 2x2 block.
template <typename T>
class Upsample2x2 {
 public:
  Tensor<T> forward(const Tensor<T>& x);  // [N,C,H,W] -> [N,C,2H,2W]
  Tensor<T> backward(const Tensor<T>& dy);

 private:
  std::vector<std::size_t> in_shape_;
};

template <typename T>
class Relu {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy) const;

 private:
  std::vector<std::uint8_t> mask_;
};

template <typename T>
class Sigmoid {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy) const;

 private:
  Tensor<T> cached_y_;
};

// Softmax over the last axis of a [N,C] tensor.
template <typename T>
class Softmax {
 public:
  Tensor<T> forward(const Tensor<T>& x);
  Tensor<T> backward(const Tensor<T>& dy) const;

 private:
  Tensor<T> cached_y_;
};

// Inverted dropout: survivors scale by 1/(1-rate) so eval mode is identity.
template <typename T>
class Dropout {
 public:
  explicit Dropout(double rate = 0.15);

  Tensor<T> forward(const Tensor<T>& x, bool train, Rng& rng);
  Tensor<T> backward(const Tensor<T>& dy) const;

  double rate() const { return rate_; }
  void set_rate(double rate);

 private:
  double rate_;
  bool train_pass_ = false;
  std::vector<T> mask_;
};

}  // namespace canids::nn
