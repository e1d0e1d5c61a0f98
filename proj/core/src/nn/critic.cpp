#include "canids/nn/critic.hpp"

#include <cmath>

#include "canids/errors.hpp"
#include "matmul.hpp"

namespace canids::nn {

namespace {

// Keeps the norm differentiable at zero input gradient.
constexpr double kNormEps = 1e-12;

template <typename T>
void add_colsum(const Tensor<T>& rows, Tensor<T>& acc) {
  const std::size_t n = rows.extent(0), c = rows.extent(1);
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = rows.data() + i * c;
    for (std::size_t j = 0; j < c; ++j) acc[j] += row[j];
  }
}

}  // namespace

template <typename T>
MlpCritic<T>::MlpCritic(const std::string& name, std::size_t input_dim,
                        std::size_t hidden_dim, bool linear_output)
    : l1(name + ".l1", input_dim, hidden_dim),
      l2(name + ".l2", hidden_dim, hidden_dim),
      l3(name + ".l3", hidden_dim, 1),
      linear_output_(linear_output) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw TopologyError("critic dimensions must be positive");
  }
}

template <typename T>
void MlpCritic<T>::init(Rng& rng) {
  l1.init(rng);
  l2.init(rng);
  l3.init(rng);
}

template <typename T>
Tensor<T> MlpCritic<T>::forward(const Tensor<T>& x) {
  Tensor<T> h = relu1_.forward(l1.forward(x));
  h = relu2_.forward(l2.forward(h));
  Tensor<T> score = l3.forward(h);
  if (!linear_output_) score = out_sigmoid_.forward(score);
  return score;
}

template <typename T>
Tensor<T> MlpCritic<T>::backward(const Tensor<T>& dy) {
  Tensor<T> g = linear_output_ ? dy : out_sigmoid_.backward(dy);
  g = l3.backward(g);
  g = relu2_.backward(g);
  g = l2.backward(g);
  g = relu1_.backward(g);
  return l1.backward(g);
}

template <typename T>
Tensor<T> MlpCritic<T>::input_gradient_of_score(const Tensor<T>& dy) const {
  Tensor<T> g = linear_output_ ? dy : out_sigmoid_.backward(dy);
  g = l3.input_gradient(g);
  g = relu2_.backward(g);
  g = l2.input_gradient(g);
  g = relu1_.backward(g);
  return l1.input_gradient(g);
}

// Intermediates of one penalty forward pass. Masks r1/r2 are treated as
// constants when differentiating (ReLU second derivative is zero a.e.).
template <typename T>
struct MlpCritic<T>::GpForward {
  std::size_t batch = 0;
  Tensor<T> x;        // [B,d]
  Tensor<T> h1, h2;   // [B,H]
  Tensor<T> r1, r2;   // ReLU masks as 0/1
  Tensor<T> a3;       // [B,1] pre-activation score
  Tensor<T> u;        // [B,H]  r2 * w3
  Tensor<T> p;        // [B,H]  r1 * (u W2^T)
  Tensor<T> q;        // [B,d]  p W1^T = grad of a3 wrt x
  std::vector<T> sig_d1, sig_d2;  // per-sample s'(a3), s''(a3)
  std::vector<T> q_sq;            // per-sample ||q||^2
  std::vector<T> norm;            // per-sample sqrt(s'^2 ||q||^2 + eps)
};

template <typename T>
void MlpCritic<T>::run_gp_forward(const Tensor<T>& x, GpForward& f) const {
  if (l1.out_dim != l2.in_dim || l2.out_dim != l3.in_dim || l3.out_dim != 1) {
    throw TopologyError("gradient penalty requires the 2-hidden-layer MLP");
  }
  if (x.rank() != 2 || x.extent(1) != l1.in_dim) {
    throw ShapeError("gradient_penalty: input shape mismatch");
  }
  const std::size_t b = x.extent(0), d = l1.in_dim, h = l1.out_dim;
  f.batch = b;
  f.x = x;

  auto affine = [](const Tensor<T>& in, const Dense<T>& layer) {
    const std::size_t n = in.extent(0);
    Tensor<T> out({n, layer.out_dim});
    for (std::size_t i = 0; i < n; ++i) {
      T* row = out.data() + i * layer.out_dim;
      for (std::size_t j = 0; j < layer.out_dim; ++j) {
        row[j] = layer.bias.value[j];
      }
    }
    detail::matmul_nn(in.data(), layer.weight.value.data(), out.data(), n,
                      layer.in_dim, layer.out_dim);
    return out;
  };

  Tensor<T> a1 = affine(x, l1);
  f.r1 = Tensor<T>({b, h});
  f.h1 = Tensor<T>({b, h});
  for (std::size_t i = 0; i < a1.size(); ++i) {
    if (a1[i] > T(0)) {
      f.r1[i] = T(1);
      f.h1[i] = a1[i];
    }
  }
  Tensor<T> a2 = affine(f.h1, l2);
  f.r2 = Tensor<T>({b, h});
  f.h2 = Tensor<T>({b, h});
  for (std::size_t i = 0; i < a2.size(); ++i) {
    if (a2[i] > T(0)) {
      f.r2[i] = T(1);
      f.h2[i] = a2[i];
    }
  }
  f.a3 = affine(f.h2, l3);

  // Input gradient of the score, factored as s'(a3) * q with q the
  // mask-gated linear chain  W1^T (r1 * (W2^T (r2 * w3))).
  f.u = Tensor<T>({b, h});
  const T* w3 = l3.weight.value.data();  // [H,1]
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      f.u.at(i, j) = f.r2.at(i, j) * w3[j];
    }
  }
  Tensor<T> v({b, h});
  detail::matmul_nt(f.u.data(), l2.weight.value.data(), v.data(), b, h, h);
  f.p = Tensor<T>({b, h});
  for (std::size_t i = 0; i < f.p.size(); ++i) f.p[i] = f.r1[i] * v[i];
  f.q = Tensor<T>({b, d});
  detail::matmul_nt(f.p.data(), l1.weight.value.data(), f.q.data(), b, h, d);

  f.sig_d1.assign(b, T(1));
  f.sig_d2.assign(b, T(0));
  if (!linear_output_) {
    for (std::size_t i = 0; i < b; ++i) {
      const T s = T(1) / (T(1) + std::exp(-f.a3[i]));
      f.sig_d1[i] = s * (T(1) - s);
      f.sig_d2[i] = f.sig_d1[i] * (T(1) - T(2) * s);
    }
  }
  f.q_sq.assign(b, T(0));
  f.norm.assign(b, T(0));
  for (std::size_t i = 0; i < b; ++i) {
    T sq{};
    const T* qrow = f.q.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) sq += qrow[j] * qrow[j];
    f.q_sq[i] = sq;
    const T g_sq = f.sig_d1[i] * f.sig_d1[i] * sq;
    f.norm[i] = static_cast<T>(
        std::sqrt(static_cast<double>(g_sq) + kNormEps));
  }
}

template <typename T>
Tensor<T> MlpCritic<T>::input_gradient(const Tensor<T>& x) const {
  GpForward f;
  run_gp_forward(x, f);
  Tensor<T> g({f.batch, l1.in_dim});
  for (std::size_t i = 0; i < f.batch; ++i) {
    const T* qrow = f.q.data() + i * l1.in_dim;
    T* grow = g.data() + i * l1.in_dim;
    for (std::size_t j = 0; j < l1.in_dim; ++j) {
      grow[j] = f.sig_d1[i] * qrow[j];
    }
  }
  return g;
}

template <typename T>
T MlpCritic<T>::gradient_penalty(const Tensor<T>& x, T coeff) {
  GpForward f;
  run_gp_forward(x, f);
  const std::size_t b = f.batch, d = l1.in_dim, h = l1.out_dim;

  T penalty{};
  // Per-sample coefficients of the two differentiation paths:
  //   alpha: through a3 (nonzero only with the sigmoid output head)
  //   c:     through q, the mask-gated linear chain
  Tensor<T> alpha({b, 1});
  Tensor<T> c({b, d});
  for (std::size_t i = 0; i < b; ++i) {
    const T diff = f.norm[i] - T(1);
    penalty += diff * diff;
    const T scale = coeff * T(2) * diff / static_cast<T>(b);
    alpha[i] = scale * f.sig_d1[i] * f.sig_d2[i] * f.q_sq[i] / f.norm[i];
    const T cq = scale * f.sig_d1[i] * f.sig_d1[i] / f.norm[i];
    const T* qrow = f.q.data() + i * d;
    T* crow = c.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) crow[j] = cq * qrow[j];
  }
  penalty = coeff * penalty / static_cast<T>(b);

  // Path through a3: standard backprop of sum_b alpha_b * a3_b with the
  // ReLU masks fixed.
  if (!linear_output_) {
    detail::matmul_tn(f.h2.data(), alpha.data(), l3.weight.grad.data(), h, b,
                      1);
    for (std::size_t i = 0; i < b; ++i) l3.bias.grad[0] += alpha[i];

    Tensor<T> d2a({b, h});
    for (std::size_t i = 0; i < b; ++i) {
      const T a = alpha[i];
      for (std::size_t j = 0; j < h; ++j) {
        d2a.at(i, j) = a * f.u.at(i, j);
      }
    }
    detail::matmul_tn(f.h1.data(), d2a.data(), l2.weight.grad.data(), h, b, h);
    add_colsum(d2a, l2.bias.grad);

    Tensor<T> d1a({b, h});
    for (std::size_t i = 0; i < b; ++i) {
      const T a = alpha[i];
      for (std::size_t j = 0; j < h; ++j) {
        d1a.at(i, j) = a * f.p.at(i, j);
      }
    }
    detail::matmul_tn(f.x.data(), d1a.data(), l1.weight.grad.data(), d, b, h);
    add_colsum(d1a, l1.bias.grad);
  }

  // Path through q: differentiate sum_b c_b . q_b in the weights, with a
  // forward sweep of the chain in the direction c (masks fixed). Biases do
  // not enter q.
  detail::matmul_tn(c.data(), f.p.data(), l1.weight.grad.data(), d, b, h);

  Tensor<T> t1({b, h});
  detail::matmul_nn(c.data(), l1.weight.value.data(), t1.data(), b, d, h);
  for (std::size_t i = 0; i < t1.size(); ++i) t1[i] *= f.r1[i];  // s1

  detail::matmul_tn(t1.data(), f.u.data(), l2.weight.grad.data(), h, b, h);

  Tensor<T> t2({b, h});
  detail::matmul_nn(t1.data(), l2.weight.value.data(), t2.data(), b, h, h);
  for (std::size_t i = 0; i < b; ++i) {
    for (std::size_t j = 0; j < h; ++j) {
      l3.weight.grad[j] += f.r2.at(i, j) * t2.at(i, j);
    }
  }

  return penalty;
}

template <typename T>
std::vector<ParamTensor<T>*> MlpCritic<T>::params() {
  return {&l1.weight, &l1.bias, &l2.weight, &l2.bias, &l3.weight, &l3.bias};
}

template <typename T>
std::vector<const ParamTensor<T>*> MlpCritic<T>::params() const {
  return {&l1.weight, &l1.bias, &l2.weight, &l2.bias, &l3.weight, &l3.bias};
}

template <typename T>
std::size_t MlpCritic<T>::param_count() const {
  std::size_t total = 0;
  for (const auto* p : params()) total += p->size();
  return total;
}

template <typename T>
void MlpCritic<T>::zero_grad() {
  for (auto* p : params()) p->zero_grad();
}

template class MlpCritic<float>;
template class MlpCritic<double>;

}  // namespace canids::nn
