#include "crkfr/grid.hpp"

namespace crkfr {

Grid1D Grid1D::uniform(double x_lo, double x_hi, int n_elements) {
  if (n_elements < 1) throw ConfigError("grid needs at least one element");
  if (!(x_hi > x_lo)) throw ConfigError("grid domain must satisfy x_hi > x_lo");
  Grid1D g;
  g.x_lo = x_lo;
  g.x_hi = x_hi;
  const double h = (x_hi - x_lo) / n_elements;
  g.dx.assign(n_elements, h);
  g.x_left.resize(n_elements);
  for (int e = 0; e < n_elements; ++e) g.x_left[e] = x_lo + e * h;
  return g;
}

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Periodic:
      return "periodic";
    case BoundaryKind::Dirichlet:
      return "dirichlet";
    case BoundaryKind::Extrapolation:
      return "extrapolation";
  }
  return "periodic";
}

BoundaryKind parse_boundary_kind(std::string_view name) {
  if (name == "periodic") return BoundaryKind::Periodic;
  if (name == "dirichlet") return BoundaryKind::Dirichlet;
  if (name == "extrapolation" || name == "outflow") return BoundaryKind::Extrapolation;
  throw ConfigError("unknown boundary kind '" + std::string(name) + "'");
}

Field interpolate(const Grid1D& grid, const SolutionPoints& points, const std::function<State(double)>& fn) {
  const int np = points.size();
  Field u(static_cast<std::size_t>(grid.size()) * np);
  for (int e = 0; e < grid.size(); ++e)
    for (int p = 0; p < np; ++p) u[e * np + p] = fn(grid.x(e, points.nodes[p]));
  return u;
}

State element_mean(const Field& u, const SolutionPoints& points, int e) {
  const int np = points.size();
  State m{};
  for (int p = 0; p < np; ++p) m += points.weights[p] * u[e * np + p];
  return m;
}

State discrete_total(const Field& u, const Grid1D& grid, const SolutionPoints& points) {
  State total{};
  for (int e = 0; e < grid.size(); ++e) total += grid.dx[e] * element_mean(u, points, e);
  return total;
}

}  // namespace crkfr
