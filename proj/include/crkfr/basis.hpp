#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace crkfr {

enum class PointKind { GL, GLL };

std::string_view to_string(PointKind kind);
PointKind parse_point_kind(std::string_view name);

/// Solution points and quadrature weights on the reference element [0, 1].
struct SolutionPoints {
  PointKind kind = PointKind::GL;
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return degree + 1; }
};

/// Reference-element operators shared by every element of a mesh.
///
/// `diff` is row-major, diff[i * n + j] = l_j'(xi_i). The correction
/// functions (Radau for GL, g2 for GLL) only ever enter through their
/// derivatives at the solution points, which are stored in `corr_left` and
/// `corr_right`.
struct ReferenceOperators {
  SolutionPoints points;
  std::vector<double> diff;
  std::vector<double> extrap_left;   // l_p(0)
  std::vector<double> extrap_right;  // l_p(1)
  std::vector<double> corr_left;     // g_L'(xi_p)
  std::vector<double> corr_right;    // g_R'(xi_p)

  int size() const { return points.size(); }
  double d(int i, int j) const { return diff[i * size() + j]; }
};

/// Gauss-Legendre or Gauss-Lobatto-Legendre nodes and weights mapped to
/// [0, 1]. Throws std::invalid_argument for N < 0, or GLL with N < 1.
SolutionPoints solution_points(PointKind kind, int degree);

std::vector<double> diff_matrix(const SolutionPoints& points);

struct BoundaryExtrapolation {
  std::vector<double> left;
  std::vector<double> right;
};
BoundaryExtrapolation boundary_extrapolation(const SolutionPoints& points);

struct CorrectionDerivatives {
  std::vector<double> left;
  std::vector<double> right;
};
CorrectionDerivatives correction_derivatives(const SolutionPoints& points);

ReferenceOperators make_operators(PointKind kind, int degree);

// Helpers shared with the limiter and the error norms.

/// Legendre polynomial P_n on [-1, 1] and its derivative.
double legendre(int n, double x);
double legendre_derivative(int n, double x);

/// Values of all Lagrange basis polynomials on `nodes` at `xi`.
std::vector<double> lagrange_values(std::span<const double> nodes, double xi);

/// Maps nodal values to coefficients of the Legendre basis P_k(2 xi - 1).
/// Row-major (N+1) x (N+1): modal[k] = sum_p M[k * (N+1) + p] * nodal[p].
std::vector<double> nodal_to_modal(const SolutionPoints& points);

}  // namespace crkfr
