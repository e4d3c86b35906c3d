#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace crkfr::kernels {

/// Dense array kernels used by the solver's inner loops. Every variant
/// performs the same floating-point operations in the same order (no fused
/// multiply-add), so all variants produce bit-identical results.
struct KernelTable {
  const char* name;
  /// y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// out = base + sum_k coeffs[k] * vecs[k], accumulated in k order.
  void (*lincomb)(double* out, const double* base, const double* coeffs, const double* const* vecs, int m,
                  std::size_t n);
  /// out = (1 - alpha) * high + alpha * low
  void (*blend)(double alpha, const double* high, const double* low, double* out, std::size_t n);
  /// out[p * stride + v] = sum_q M[p * rows + q] * in[q * stride + v] for a
  /// rows x rows matrix and v < width, accumulated in q order. Columns
  /// width..stride-1 of out are set to zero.
  void (*small_matmul)(const double* M, int rows, const double* in, double* out, int stride, int width);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// Active table. Defaults to the widest supported variant; the CRKFR_SIMD
/// environment variable ("scalar" or "avx2") overrides the choice.
const KernelTable& active();

/// Forces a variant by name for the rest of the process; false if the
/// variant is not available.
bool select(const std::string& name);

std::vector<std::string> available_variants();

}  // namespace crkfr::kernels
