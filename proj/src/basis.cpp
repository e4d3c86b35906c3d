#include "crkfr/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace crkfr {

std::string_view to_string(PointKind kind) {
  return kind == PointKind::GL ? "gl" : "gll";
}

PointKind parse_point_kind(std::string_view name) {
  if (name == "gl" || name == "GL") return PointKind::GL;
  if (name == "gll" || name == "GLL") return PointKind::GLL;
  throw std::invalid_argument("unknown solution point kind '" + std::string(name) + "'");
}

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double x) {
  // Recurrence P'_{k+1} = P'_{k-1} + (2k + 1) P_k avoids the 1/(1 - x^2)
  // singularity at the endpoints.
  if (n == 0) return 0.0;
  double dm1 = 0.0;  // P'_0
  double d0 = 1.0;   // P'_1
  for (int k = 1; k < n; ++k) {
    const double d1 = dm1 + (2.0 * k + 1.0) * legendre(k, x);
    dm1 = d0;
    d0 = d1;
  }
  return d0;
}

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

// Gauss-Legendre nodes/weights on [-1, 1], n points.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess, descending; reversed below.
    double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      const double dx = legendre(n, xi) / legendre_derivative(n, xi);
      xi -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    const double dp = legendre_derivative(n, xi);
    x[n - 1 - i] = xi;
    w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

// Gauss-Lobatto-Legendre nodes/weights on [-1, 1], n >= 2 points. Interior
// nodes are roots of P'_{n-1}.
void gauss_lobatto(int n, std::vector<double>& x, std::vector<double>& w) {
  const int N = n - 1;
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  x[0] = -1.0;
  x[N] = 1.0;
  for (int i = 1; i < N; ++i) {
    double xi = -std::cos(std::numbers::pi * i / N);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      // (1 - x^2) P''_N = 2x P'_N - N(N+1) P_N
      const double p = legendre(N, xi);
      const double dp = legendre_derivative(N, xi);
      const double d2p = (2.0 * xi * dp - N * (N + 1.0) * p) / (1.0 - xi * xi);
      const double dx = dp / d2p;
      xi -= dx;
      if (std::abs(dx) < kNewtonTol) break;
    }
    x[i] = xi;
  }
  for (int i = 0; i < n; ++i) {
    const double p = legendre(N, x[i]);
    w[i] = 2.0 / (N * (N + 1.0) * p * p);
  }
}

std::vector<double> barycentric_weights(std::span<const double> nodes) {
  const auto n = nodes.size();
  std::vector<double> bw(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) bw[j] /= (nodes[j] - nodes[k]);
  return bw;
}

}  // namespace

SolutionPoints solution_points(PointKind kind, int degree) {
  if (degree < 0) throw std::invalid_argument("polynomial degree must be non-negative");
  if (kind == PointKind::GLL && degree < 1)
    throw std::invalid_argument("Gauss-Lobatto-Legendre points need degree >= 1");

  SolutionPoints sp;
  sp.kind = kind;
  sp.degree = degree;
  std::vector<double> x, w;
  if (kind == PointKind::GL)
    gauss_legendre(degree + 1, x, w);
  else
    gauss_lobatto(degree + 1, x, w);

  sp.nodes.resize(x.size());
  sp.weights.resize(w.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sp.nodes[i] = 0.5 * (x[i] + 1.0);
    sp.weights[i] = 0.5 * w[i];
  }
  return sp;
}

std::vector<double> lagrange_values(std::span<const double> nodes, double xi) {
  const auto n = nodes.size();
  std::vector<double> l(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) l[j] *= (xi - nodes[k]) / (nodes[j] - nodes[k]);
  return l;
}

std::vector<double> diff_matrix(const SolutionPoints& points) {
  const int n = points.size();
  const auto& x = points.nodes;
  const auto bw = barycentric_weights(x);
  std::vector<double> D(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D[i * n + j] = (bw[j] / bw[i]) / (x[i] - x[j]);
      diag -= D[i * n + j];
    }
    // Negative-sum trick: rows sum to zero exactly.
    D[i * n + i] = diag;
  }
  return D;
}

BoundaryExtrapolation boundary_extrapolation(const SolutionPoints& points) {
  return {lagrange_values(points.nodes, 0.0), lagrange_values(points.nodes, 1.0)};
}

CorrectionDerivatives correction_derivatives(const SolutionPoints& points) {
  const auto ext = boundary_extrapolation(points);
  const int n = points.size();
  CorrectionDerivatives c{std::vector<double>(n), std::vector<double>(n)};
  for (int p = 0; p < n; ++p) {
    c.left[p] = -ext.left[p] / points.weights[p];
    c.right[p] = ext.right[p] / points.weights[p];
  }
  return c;
}

ReferenceOperators make_operators(PointKind kind, int degree) {
  ReferenceOperators ops;
  ops.points = solution_points(kind, degree);
  ops.diff = diff_matrix(ops.points);
  auto ext = boundary_extrapolation(ops.points);
  ops.extrap_left = std::move(ext.left);
  ops.extrap_right = std::move(ext.right);
  auto corr = correction_derivatives(ops.points);
  ops.corr_left = std::move(corr.left);
  ops.corr_right = std::move(corr.right);
  return ops;
}

std::vector<double> nodal_to_modal(const SolutionPoints& points) {
  const int n = points.size();
  // Vandermonde V[p][k] = P_k(2 xi_p - 1); invert by Gauss-Jordan with
  // partial pivoting (n <= ~10).
  std::vector<double> a(n * n), inv(n * n, 0.0);
  for (int p = 0; p < n; ++p) {
    for (int k = 0; k < n; ++k) a[p * n + k] = legendre(k, 2.0 * points.nodes[p] - 1.0);
    inv[p * n + p] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (piv != col)
      for (int c = 0; c < n; ++c) {
        std::swap(a[piv * n + c], a[col * n + c]);
        std::swap(inv[piv * n + c], inv[col * n + c]);
      }
    const double d = a[col * n + col];
    for (int c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  return inv;
}

}  // namespace crkfr
