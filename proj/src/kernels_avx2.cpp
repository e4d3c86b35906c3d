#include <immintrin.h>

#include "crkfr/kernels.hpp"

namespace crkfr::kernels {

namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), p));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void lincomb(double* out, const double* base, const double* coeffs, const double* const* vecs, int m,
             std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(base + i);
    for (int k = 0; k < m; ++k)
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(coeffs[k]), _mm256_loadu_pd(vecs[k] + i)));
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = base[i];
    for (int k = 0; k < m; ++k) acc += coeffs[k] * vecs[k][i];
    out[i] = acc;
  }
}

void blend(double alpha, const double* high, const double* low, double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d h = _mm256_mul_pd(vb, _mm256_loadu_pd(high + i));
    const __m256d l = _mm256_mul_pd(va, _mm256_loadu_pd(low + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(h, l));
  }
  for (; i < n; ++i) out[i] = beta * high[i] + alpha * low[i];
}

// W > 0 fixes the width at compile time; W = 0 reads it from `width`.
template <int W>
void matmul_w(const double* M, int rows, const double* in, double* out, int stride, int width) {
  if constexpr (W > 0) width = W;
  for (int p = 0; p < rows; ++p) {
    double* o = out + p * stride;
    int v = 0;
    for (; v + 4 <= width; v += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (int q = 0; q < rows; ++q)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(M[p * rows + q]), _mm256_loadu_pd(in + q * stride + v)));
      _mm256_storeu_pd(o + v, acc);
    }
    for (; v < width; ++v) {
      double acc = 0.0;
      for (int q = 0; q < rows; ++q) acc += M[p * rows + q] * in[q * stride + v];
      o[v] = acc;
    }
    for (; v < stride; ++v) o[v] = 0.0;
  }
}

void small_matmul(const double* M, int rows, const double* in, double* out, int stride, int width) {
  switch (width) {
    case 1: return matmul_w<1>(M, rows, in, out, stride, width);
    case 2: return matmul_w<2>(M, rows, in, out, stride, width);
    case 3: return matmul_w<3>(M, rows, in, out, stride, width);
    case 4: return matmul_w<4>(M, rows, in, out, stride, width);
    case 6: return matmul_w<6>(M, rows, in, out, stride, width);
    default: return matmul_w<0>(M, rows, in, out, stride, width);
  }
}

constexpr KernelTable kAvx2{"avx2", axpy, lincomb, blend, small_matmul};

}  // namespace

const KernelTable* avx2_table_impl() { return &kAvx2; }

}  // namespace crkfr::kernels
