#include "crkfr/kernels.hpp"

namespace crkfr::kernels {

namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void lincomb(double* out, const double* base, const double* coeffs, const double* const* vecs, int m,
             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = base[i];
    for (int k = 0; k < m; ++k) acc += coeffs[k] * vecs[k][i];
    out[i] = acc;
  }
}

void blend(double alpha, const double* high, const double* low, double* out, std::size_t n) {
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) out[i] = beta * high[i] + alpha * low[i];
}

// W > 0 fixes the width at compile time; W = 0 reads it from `width`.
template <int W>
void matmul_w(const double* M, int rows, const double* in, double* out, int stride, int width) {
  const int n = W > 0 ? W : width;
  for (int p = 0; p < rows; ++p) {
    double* o = out + p * stride;
    for (int v = 0; v < stride; ++v) o[v] = 0.0;
    for (int q = 0; q < rows; ++q) {
      const double m = M[p * rows + q];
      const double* x = in + q * stride;
      for (int v = 0; v < n; ++v) o[v] += m * x[v];
    }
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

constexpr KernelTable kScalar{"scalar", axpy, lincomb, blend, small_matmul};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace crkfr::kernels
