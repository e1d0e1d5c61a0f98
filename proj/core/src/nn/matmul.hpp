#pragma once

#include <cstddef>

// Row-major matmul kernels, accumulate into C. Loop orders chosen so the
// inner loop is contiguous and auto-vectorizes.

namespace canids::nn::detail {

// C[M,N] += A[M,K] * B[K,N]
template <typename T>
void matmul_nn(const T* __restrict a, const T* __restrict b, T* __restrict c,
               std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    T* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = arow[p];
      const T* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[M,N] += A[M,K] * B[N,K]^T  (dot products along K)
template <typename T>
void matmul_nt(const T* __restrict a, const T* __restrict b, T* __restrict c,
               std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    T* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const T* brow = b + j * k;
      T acc{};
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] += acc;
    }
  }
}

// C[M,N] += A[K,M]^T * B[K,N]
template <typename T>
void matmul_tn(const T* __restrict a, const T* __restrict b, T* __restrict c,
               std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const T* arow = a + p * m;
    const T* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const T av = arow[i];
      T* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace canids::nn::detail
