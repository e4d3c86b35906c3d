#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/state.hpp"

namespace crkfr {

/// Elements [x_left[e], x_left[e] + dx[e]] covering [x_lo, x_hi].
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<double> x_left;
  std::vector<double> dx;

  static Grid1D uniform(double x_lo, double x_hi, int n_elements);

  int size() const { return static_cast<int>(dx.size()); }
  double length() const { return x_hi - x_lo; }
  /// Physical coordinate of reference point xi in element e.
  double x(int e, double xi) const { return x_left[e] + xi * dx[e]; }
};

enum class BoundaryKind { Periodic, Dirichlet, Extrapolation };

std::string_view to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(std::string_view name);

/// Boundary treatment on one side. Dirichlet boundaries evaluate `value`
/// at the boundary coordinate and the requested time.
struct Boundary {
  BoundaryKind kind = BoundaryKind::Periodic;
  std::function<State(double t, double x)> value;
};

/// Nodal field: index e * (N + 1) + p.
using Field = std::vector<State>;

/// Interpolates fn at the solution points of every element.
Field interpolate(const Grid1D& grid, const SolutionPoints& points, const std::function<State(double)>& fn);

/// Element mean sum_p w_p u_{e,p}.
State element_mean(const Field& u, const SolutionPoints& points, int e);

/// Discrete total sum_e dx_e * mean_e.
State discrete_total(const Field& u, const Grid1D& grid, const SolutionPoints& points);

}  // namespace crkfr
