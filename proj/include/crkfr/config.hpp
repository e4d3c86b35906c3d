#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include "crkfr/basis.hpp"
#include "crkfr/implicit.hpp"
#include "crkfr/limiter.hpp"
#include "crkfr/solver.hpp"

namespace crkfr {

enum class GuessStrategy { ExplicitPredictor, HomogeneousThreshold };
enum class HomogeneousPass { HighOrder, FirstOrder };

std::string_view to_string(GuessStrategy v);
std::string_view to_string(HomogeneousPass v);
GuessStrategy parse_guess_strategy(std::string_view name);
HomogeneousPass parse_homogeneous_pass(std::string_view name);

/// Everything needed to reproduce one run.
struct RunConfig {
  /// Scenario preset providing the initial and boundary data.
  std::string scenario;
  std::string equation;
  std::map<std::string, double> equation_params;

  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_elements = 16;
  int degree = 3;
  PointKind points = PointKind::GL;
  std::string time_scheme = "ssp3_imex_433";
  double t_final = 1.0;
  double cfl_safety = 0.9;
  double cfl_override = 0.0;
  double dt_max = std::numeric_limits<double>::infinity();
  BoundaryKind left_bc = BoundaryKind::Periodic;
  BoundaryKind right_bc = BoundaryKind::Periodic;
  NconsFlux ncons_flux = NconsFlux::Trace;
  LimiterConfig limiter;
  ImplicitConfig implicit;
  GuessStrategy guess_strategy = GuessStrategy::ExplicitPredictor;
  HomogeneousPass homogeneous_pass = HomogeneousPass::HighOrder;
  bool explicit_source = false;
  int threads = 1;
  /// Reserved; nothing in the solver is random.
  std::uint64_t seed = 0;

  std::string out_dir = ".";
  std::string csv_name = "solution.csv";
  std::string json_name = "diagnostics.json";

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError describing the first violated requirement.
void validate(const RunConfig& config);

/// Parses INI text. Keys outside sections and in [run] set the run fields;
/// [equation] holds equation parameters; [limiter], [implicit] and
/// [output] hold their groups. If `scenario` is set, the preset is loaded
/// first and the file overrides it.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// INI text that parse_config maps back to the same RunConfig.
std::string to_ini(const RunConfig& config);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace crkfr
