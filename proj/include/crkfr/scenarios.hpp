#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crkfr/config.hpp"
#include "crkfr/equations.hpp"

namespace crkfr {

/// Named test problem: default run settings plus initial, boundary and
/// (where known) exact data in conserved variables.
struct Scenario {
  std::string name;
  std::string description;
  RunConfig defaults;
  std::function<State(const EquationSystem&, double x)> initial;
  /// Empty when no closed form is known.
  std::function<State(const EquationSystem&, double t, double x)> exact;
  /// Values imposed at Dirichlet boundaries.
  std::function<State(const EquationSystem&, double t, double x)> boundary;
};

const Scenario& scenario_by_name(const std::string& name);
std::vector<std::string> scenario_names();

}  // namespace crkfr
