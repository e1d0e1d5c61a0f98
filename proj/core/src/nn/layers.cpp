#include "canids/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "canids/errors.hpp"
#include "matmul.hpp"

namespace canids::nn {

// ---------------------------------------------------------------- Dense

template <typename T>
Dense<T>::Dense(std::string name, std::size_t in, std::size_t out)
    : weight(name + ".weight", {in, out}),
      bias(name + ".bias", {out}),
      in_dim(in),
      out_dim(out) {}

template <typename T>
void Dense<T>::init(Rng& rng) {
  init_kaiming_uniform(weight.value, in_dim, rng);
  bias.value.zero();
}

template <typename T>
Tensor<T> Dense<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 2 || x.extent(1) != in_dim) {
    throw ShapeError(weight.name + ": input shape mismatch");
  }
  cached_x_ = x;
  const std::size_t n = x.extent(0);
  Tensor<T> y({n, out_dim});
  for (std::size_t i = 0; i < n; ++i) {
    T* row = y.data() + i * out_dim;
    for (std::size_t j = 0; j < out_dim; ++j) row[j] = bias.value[j];
  }
  detail::matmul_nn(x.data(), weight.value.data(), y.data(), n, in_dim,
                    out_dim);
  return y;
}

template <typename T>
Tensor<T> Dense<T>::backward(const Tensor<T>& dy) {
  const std::size_t n = cached_x_.extent(0);
  require_shape(dy, {n, out_dim}, "Dense::backward");
  // dW += x^T dy, db += column sums of dy
  detail::matmul_tn(cached_x_.data(), dy.data(), weight.grad.data(), in_dim, n,
                    out_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = dy.data() + i * out_dim;
    for (std::size_t j = 0; j < out_dim; ++j) bias.grad[j] += row[j];
  }
  return input_gradient(dy);
}

template <typename T>
Tensor<T> Dense<T>::input_gradient(const Tensor<T>& dy) const {
  const std::size_t n = dy.extent(0);
  Tensor<T> dx({n, in_dim});
  detail::matmul_nt(dy.data(), weight.value.data(), dx.data(), n, out_dim,
                    in_dim);
  return dx;
}

// ---------------------------------------------------------------- Conv2d

template <typename T>
Conv2d<T>::Conv2d(std::string name, std::size_t in_ch, std::size_t out_ch)
    : weight(name + ".weight", {out_ch, in_ch, 3, 3}),
      bias(name + ".bias", {out_ch}),
      in_channels(in_ch),
      out_channels(out_ch) {}

template <typename T>
void Conv2d<T>::init(Rng& rng) {
  init_kaiming_uniform(weight.value, in_channels * 9, rng);
  bias.value.zero();
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 4 || x.extent(1) != in_channels) {
    throw ShapeError(weight.name + ": input shape mismatch");
  }
  cached_x_ = x;
  const std::size_t n = x.extent(0), h = x.extent(2), w = x.extent(3);
  Tensor<T> y({n, out_channels, h, w});

  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t k = 0; k < out_channels; ++k) {
      T* plane = &y.at(b, k, 0, 0);
      const T bk = bias.value[k];
      for (std::size_t i = 0; i < h * w; ++i) plane[i] = bk;
      for (std::size_t c = 0; c < in_channels; ++c) {
        for (std::size_t kh = 0; kh < 3; ++kh) {
          for (std::size_t kw = 0; kw < 3; ++kw) {
            const T wv = weight.value.at(k, c, kh, kw);
            if (wv == T(0)) continue;
            const std::size_t ow_lo = kw == 0 ? 1 : 0;
            const std::size_t ow_hi = kw == 2 ? w - 1 : w;
            for (std::size_t oh = 0; oh < h; ++oh) {
              const std::size_t ih = oh + kh;
              if (ih < 1 || ih > h) continue;
              const T* in_row = &cached_x_.at(b, c, ih - 1, 0) + kw;
              T* out_row = plane + oh * w;
              for (std::size_t ow = ow_lo; ow < ow_hi; ++ow) {
                out_row[ow] += wv * in_row[ow - 1];
              }
            }
          }
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& dy) {
  const std::size_t n = cached_x_.extent(0), h = cached_x_.extent(2),
                    w = cached_x_.extent(3);
  require_shape(dy, {n, out_channels, h, w}, "Conv2d::backward");

  Tensor<T> dx({n, in_channels, h, w});
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t k = 0; k < out_channels; ++k) {
      const T* dplane = &dy.at(b, k, 0, 0);
      T acc_bias{};
      for (std::size_t i = 0; i < h * w; ++i) acc_bias += dplane[i];
      bias.grad[k] += acc_bias;

      for (std::size_t c = 0; c < in_channels; ++c) {
        for (std::size_t kh = 0; kh < 3; ++kh) {
          for (std::size_t kw = 0; kw < 3; ++kw) {
            const std::size_t ow_lo = kw == 0 ? 1 : 0;
            const std::size_t ow_hi = kw == 2 ? w - 1 : w;
            const T wv = weight.value.at(k, c, kh, kw);
            T acc_w{};
            for (std::size_t oh = 0; oh < h; ++oh) {
              const std::size_t ih = oh + kh;
              if (ih < 1 || ih > h) continue;
              const T* x_row = &cached_x_.at(b, c, ih - 1, 0) + kw;
              T* dx_row = &dx.at(b, c, ih - 1, 0) + kw;
              const T* dy_row = dplane + oh * w;
              for (std::size_t ow = ow_lo; ow < ow_hi; ++ow) {
                acc_w += dy_row[ow] * x_row[ow - 1];
                dx_row[ow - 1] += wv * dy_row[ow];
              }
            }
            weight.grad.at(k, c, kh, kw) += acc_w;
          }
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- pooling

template <typename T>
Tensor<T> MaxPool2x2<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 4) throw ShapeError("MaxPool2x2: expected NCHW input");
  const std::size_t n = x.extent(0), c = x.extent(1), h = x.extent(2),
                    w = x.extent(3);
  if (h % 2 != 0 || w % 2 != 0) {
    throw ShapeError("MaxPool2x2: H and W must be even");
  }
  in_shape_ = x.shape();
  Tensor<T> y({n, c, h / 2, w / 2});
  argmax_.assign(y.size(), 0);

  std::size_t out_i = 0;
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t oh = 0; oh < h / 2; ++oh) {
        for (std::size_t ow = 0; ow < w / 2; ++ow) {
          const std::size_t base =
              ((b * c + ch) * h + 2 * oh) * w + 2 * ow;
          const std::size_t idx[4] = {base, base + 1, base + w, base + w + 1};
          std::size_t best = idx[0];
          T best_v = x[idx[0]];
          for (int t = 1; t < 4; ++t) {
            if (x[idx[t]] > best_v) {
              best_v = x[idx[t]];
              best = idx[t];
            }
          }
          y[out_i] = best_v;
          argmax_[out_i] = best;
          ++out_i;
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> MaxPool2x2<T>::backward(const Tensor<T>& dy) {
  if (dy.size() != argmax_.size()) {
    throw ShapeError("MaxPool2x2::backward: gradient shape mismatch");
  }
  Tensor<T> dx(in_shape_);
  for (std::size_t i = 0; i < dy.size(); ++i) {
    dx[argmax_[i]] += dy[i];
  }
  return dx;
}

template <typename T>
Tensor<T> Upsample2x2<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 4) throw ShapeError("Upsample2x2: expected NCHW input");
  const std::size_t n = x.extent(0), c = x.extent(1), h = x.extent(2),
                    w = x.extent(3);
  in_shape_ = x.shape();
  Tensor<T> y({n, c, 2 * h, 2 * w});
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t ih = 0; ih < h; ++ih) {
        const T* src = &x.at(b, ch, ih, 0);
        T* d0 = &y.at(b, ch, 2 * ih, 0);
        T* d1 = &y.at(b, ch, 2 * ih + 1, 0);
        for (std::size_t iw = 0; iw < w; ++iw) {
          d0[2 * iw] = d0[2 * iw + 1] = src[iw];
          d1[2 * iw] = d1[2 * iw + 1] = src[iw];
        }
      }
    }
  }
  return y;
}

template <typename T>
Tensor<T> Upsample2x2<T>::backward(const Tensor<T>& dy) {
  const std::size_t n = in_shape_[0], c = in_shape_[1], h = in_shape_[2],
                    w = in_shape_[3];
  require_shape(dy, {n, c, 2 * h, 2 * w}, "Upsample2x2::backward");
  Tensor<T> dx(in_shape_);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      for (std::size_t ih = 0; ih < h; ++ih) {
        const T* s0 = &dy.at(b, ch, 2 * ih, 0);
        const T* s1 = &dy.at(b, ch, 2 * ih + 1, 0);
        T* dst = &dx.at(b, ch, ih, 0);
        for (std::size_t iw = 0; iw < w; ++iw) {
          dst[iw] = s0[2 * iw] + s0[2 * iw + 1] + s1[2 * iw] + s1[2 * iw + 1];
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- activations

template <typename T>
Tensor<T> Relu<T>::forward(const Tensor<T>& x) {
  mask_.assign(x.size(), 0);
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > T(0)) {
      y[i] = x[i];
      mask_[i] = 1;
    }
  }
  return y;
}

template <typename T>
Tensor<T> Relu<T>::backward(const Tensor<T>& dy) const {
  if (dy.size() != mask_.size()) {
    throw ShapeError("Relu::backward: gradient shape mismatch");
  }
  Tensor<T> dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) {
    dx[i] = mask_[i] ? dy[i] : T(0);
  }
  return dx;
}

template <typename T>
Tensor<T> Sigmoid<T>::forward(const Tensor<T>& x) {
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = T(1) / (T(1) + std::exp(-x[i]));
  }
  cached_y_ = y;
  return y;
}

template <typename T>
Tensor<T> Sigmoid<T>::backward(const Tensor<T>& dy) const {
  if (!dy.same_shape(cached_y_)) {
    throw ShapeError("Sigmoid::backward: gradient shape mismatch");
  }
  Tensor<T> dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const T s = cached_y_[i];
    dx[i] = dy[i] * s * (T(1) - s);
  }
  return dx;
}

template <typename T>
Tensor<T> Softmax<T>::forward(const Tensor<T>& x) {
  if (x.rank() != 2) throw ShapeError("Softmax: expected [N,C] input");
  const std::size_t n = x.extent(0), c = x.extent(1);
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = x.data() + i * c;
    T* out = y.data() + i * c;
    T mx = row[0];
    for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    T sum{};
    for (std::size_t j = 0; j < c; ++j) {
      out[j] = std::exp(row[j] - mx);
      sum += out[j];
    }
    for (std::size_t j = 0; j < c; ++j) out[j] /= sum;
  }
  cached_y_ = y;
  return y;
}

template <typename T>
Tensor<T> Softmax<T>::backward(const Tensor<T>& dy) const {
  if (!dy.same_shape(cached_y_)) {
    throw ShapeError("Softmax::backward: gradient shape mismatch");
  }
  const std::size_t n = dy.extent(0), c = dy.extent(1);
  Tensor<T> dx(dy.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* g = dy.data() + i * c;
    const T* y = cached_y_.data() + i * c;
    T dot{};
    for (std::size_t j = 0; j < c; ++j) dot += g[j] * y[j];
    T* out = dx.data() + i * c;
    for (std::size_t j = 0; j < c; ++j) out[j] = y[j] * (g[j] - dot);
  }
  return dx;
}

// ---------------------------------------------------------------- dropout

template <typename T>
Dropout<T>::Dropout(double rate) : rate_(rate) {
  set_rate(rate);
}

template <typename T>
void Dropout<T>::set_rate(double rate) {
  if (rate < 0.0 || rate >= 1.0) {
    throw ConfigError("dropout rate must be in [0, 1)");
  }
  rate_ = rate;
}

template <typename T>
Tensor<T> Dropout<T>::forward(const Tensor<T>& x, bool train, Rng& rng) {
  train_pass_ = train && rate_ > 0.0;
  if (!train_pass_) return x;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate_));
  mask_.assign(x.size(), T(0));
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!rng.bernoulli(rate_)) {
      mask_[i] = keep_scale;
      y[i] = x[i] * keep_scale;
    }
  }
  return y;
}

template <typename T>
Tensor<T> Dropout<T>::backward(const Tensor<T>& dy) const {
  if (!train_pass_) return dy;
  if (dy.size() != mask_.size()) {
    throw ShapeError("Dropout::backward: gradient shape mismatch");
  }
  Tensor<T> dx(dy.shape());
  for (std::size_t i = 0; i < dy.size(); ++i) dx[i] = dy[i] * mask_[i];
  return dx;
}

template class Dense<float>;
template class Dense<double>;
template class Conv2d<float>;
template class Conv2d<double>;
template class MaxPool2x2<float>;
template class MaxPool2x2<double>;
template class Upsample2x2<float>;
template class Upsample2x2<double>;
template class Relu<float>;
template class Relu<double>;
template class Sigmoid<float>;
template class Sigmoid<double>;
template class Softmax<float>;
template class Softmax<double>;
template class Dropout<float>;
template class Dropout<double>;

}  // namespace canids::nn
