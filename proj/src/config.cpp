#include "crkfr/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crkfr/equations.hpp"
#include "crkfr/scenarios.hpp"
#include "crkfr/tableau.hpp"

namespace crkfr {

namespace pt = boost::property_tree;

std::string_view to_string(GuessStrategy v) {
  return v == GuessStrategy::ExplicitPredictor ? "explicit_predictor" : "homogeneous_threshold";
}

std::string_view to_string(HomogeneousPass v) { return v == HomogeneousPass::HighOrder ? "high_order" : "first_order"; }

GuessStrategy parse_guess_strategy(std::string_view name) {
  if (name == "explicit_predictor") return GuessStrategy::ExplicitPredictor;
  if (name == "homogeneous_threshold") return GuessStrategy::HomogeneousThreshold;
  throw ConfigError("unknown guess_strategy '" + std::string(name) + "'");
}

HomogeneousPass parse_homogeneous_pass(std::string_view name) {
  if (name == "high_order") return HomogeneousPass::HighOrder;
  if (name == "first_order") return HomogeneousPass::FirstOrder;
  throw ConfigError("unknown homogeneous_pass '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw ConfigError("key '" + key + "': '" + s + "' is not a number");
  return v;
}

long long to_int(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("key '" + key + "': '" + s + "' is not a boolean");
}

void apply_run_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "scenario") c.scenario = v;
  else if (key == "equation") c.equation = v;
  else if (key == "x_lo") c.x_lo = to_double(key, v);
  else if (key == "x_hi") c.x_hi = to_double(key, v);
  else if (key == "n_elements") c.n_elements = static_cast<int>(to_int(key, v));
  else if (key == "degree") c.degree = static_cast<int>(to_int(key, v));
  else if (key == "points") c.points = parse_point_kind(v);
  else if (key == "time_scheme") c.time_scheme = v;
  else if (key == "t_final") c.t_final = to_double(key, v);
  else if (key == "cfl_safety") c.cfl_safety = to_double(key, v);
  else if (key == "cfl_override") c.cfl_override = to_double(key, v);
  else if (key == "dt_max") c.dt_max = to_double(key, v);
  else if (key == "left_bc") c.left_bc = parse_boundary_kind(v);
  else if (key == "right_bc") c.right_bc = parse_boundary_kind(v);
  else if (key == "ncons_flux") c.ncons_flux = parse_ncons_flux(v);
  else if (key == "guess_strategy") c.guess_strategy = parse_guess_strategy(v);
  else if (key == "homogeneous_pass") c.homogeneous_pass = parse_homogeneous_pass(v);
  else if (key == "explicit_source") c.explicit_source = to_bool(key, v);
  else if (key == "threads") c.threads = static_cast<int>(to_int(key, v));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, v));
  else throw ConfigError("unknown key '" + key + "'");
}

void apply_limiter_key(LimiterConfig& l, const std::string& key, const std::string& v) {
  const std::string full = "limiter." + key;
  if (key == "enabled") l.enabled = to_bool(full, v);
  else if (key == "pure_low_order") l.pure_low_order = to_bool(full, v);
  else if (key == "alpha_max") l.alpha_max = to_double(full, v);
  else if (key == "alpha_min") l.alpha_min = to_double(full, v);
  else if (key == "threshold_scale") l.threshold_scale = to_double(full, v);
  else if (key == "threshold_exponent") l.threshold_exponent = to_double(full, v);
  else if (key == "sharpness") l.sharpness = to_double(full, v);
  else if (key == "indicator_variable") l.indicator_variable = v;
  else throw ConfigError("unknown key '" + full + "'");
}

void apply_implicit_key(ImplicitConfig& c, const std::string& key, const std::string& v) {
  const std::string full = "implicit." + key;
  if (key == "max_iter") c.max_iterations = static_cast<int>(to_int(full, v));
  else if (key == "tol") c.residual_tolerance = to_double(full, v);
  else if (key == "damping") c.damping = to_double(full, v);
  else if (key == "step_tol") c.step_tolerance = to_double(full, v);
  else if (key == "max_backtracks") c.max_backtracks = static_cast<int>(to_int(full, v));
  else throw ConfigError("unknown key '" + full + "'");
}

void apply_output_key(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "dir") c.out_dir = v;
  else if (key == "csv") c.csv_name = v;
  else if (key == "json") c.json_name = v;
  else throw ConfigError("unknown key 'output." + key + "'");
}

std::string find_scenario(const pt::ptree& tree) {
  std::string name;
  for (const auto& [key, node] : tree) {
    if (node.empty() && key == "scenario") name = node.data();
    if (key == "run")
      if (auto s = node.get_optional<std::string>("scenario")) name = *s;
  }
  return name;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.equation.empty()) throw ConfigError("no equation selected");
  if (!(c.t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (c.n_elements < 2) throw ConfigError("n_elements must be at least 2");
  if (c.degree < 0 || c.degree > kMaxDegree) throw ConfigError("degree must be in [0, 9]");
  if (c.points == PointKind::GLL && c.degree < 1) throw ConfigError("GLL points need degree >= 1");
  if (!(c.x_hi > c.x_lo)) throw ConfigError("x_hi must exceed x_lo");
  if (!(c.cfl_safety > 0.0)) throw ConfigError("cfl_safety must be positive");
  if (c.cfl_override < 0.0) throw ConfigError("cfl_override must be non-negative");
  if (!(c.dt_max > 0.0)) throw ConfigError("dt_max must be positive");
  if ((c.left_bc == BoundaryKind::Periodic) != (c.right_bc == BoundaryKind::Periodic))
    throw ConfigError("periodic boundaries must be set on both sides");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (!(c.limiter.alpha_max > 0.0 && c.limiter.alpha_max <= 1.0)) throw ConfigError("limiter.alpha_max must be in (0, 1]");
  if (!(c.implicit.residual_tolerance > 0.0)) throw ConfigError("implicit.tol must be positive");
  if (!(c.implicit.damping > 0.0 && c.implicit.damping <= 1.0)) throw ConfigError("implicit.damping must be in (0, 1]");
  if (c.implicit.max_iterations < 1) throw ConfigError("implicit.max_iter must be positive");
  tableau_by_name(c.time_scheme);
  make_equation(c.equation, c.equation_params);
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  RunConfig c;
  if (const std::string name = find_scenario(tree); !name.empty()) c = scenario_by_name(name).defaults;

  for (const auto& [key, node] : tree) {
    if (node.empty()) {
      apply_run_key(c, key, node.data());
      continue;
    }
    for (const auto& [sub, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("nested section '" + key + "." + sub + "'");
      const std::string& v = leaf.data();
      if (key == "run") apply_run_key(c, sub, v);
      else if (key == "equation") c.equation_params[sub] = to_double("equation." + sub, v);
      else if (key == "limiter") apply_limiter_key(c.limiter, sub, v);
      else if (key == "implicit") apply_implicit_key(c.implicit, sub, v);
      else if (key == "output") apply_output_key(c, sub, v);
      else throw ConfigError("unknown section [" + key + "]");
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_ini(const RunConfig& c) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::ostringstream o;
  o << "[run]\n";
  if (!c.scenario.empty()) o << "scenario = " << c.scenario << "\n";
  o << "equation = " << c.equation << "\n"
    << "x_lo = " << format_double(c.x_lo) << "\n"
    << "x_hi = " << format_double(c.x_hi) << "\n"
    << "n_elements = " << c.n_elements << "\n"
    << "degree = " << c.degree << "\n"
    << "points = " << to_string(c.points) << "\n"
    << "time_scheme = " << c.time_scheme << "\n"
    << "t_final = " << format_double(c.t_final) << "\n"
    << "cfl_safety = " << format_double(c.cfl_safety) << "\n"
    << "cfl_override = " << format_double(c.cfl_override) << "\n"
    << "dt_max = " << format_double(c.dt_max) << "\n"
    << "left_bc = " << to_string(c.left_bc) << "\n"
    << "right_bc = " << to_string(c.right_bc) << "\n"
    << "ncons_flux = " << to_string(c.ncons_flux) << "\n"
    << "guess_strategy = " << to_string(c.guess_strategy) << "\n"
    << "homogeneous_pass = " << to_string(c.homogeneous_pass) << "\n"
    << "explicit_source = " << b(c.explicit_source) << "\n"
    << "threads = " << c.threads << "\n"
    << "seed = " << c.seed << "\n";
  if (!c.equation_params.empty()) {
    o << "\n[equation]\n";
    for (const auto& [k, v] : c.equation_params) o << k << " = " << format_double(v) << "\n";
  }
  const auto& l = c.limiter;
  o << "\n[limiter]\n"
    << "enabled = " << b(l.enabled) << "\n"
    << "pure_low_order = " << b(l.pure_low_order) << "\n"
    << "alpha_max = " << format_double(l.alpha_max) << "\n"
    << "alpha_min = " << format_double(l.alpha_min) << "\n"
    << "threshold_scale = " << format_double(l.threshold_scale) << "\n"
    << "threshold_exponent = " << format_double(l.threshold_exponent) << "\n"
    << "sharpness = " << format_double(l.sharpness) << "\n"
    << "indicator_variable = " << l.indicator_variable << "\n";
  const auto& im = c.implicit;
  o << "\n[implicit]\n"
    << "max_iter = " << im.max_iterations << "\n"
    << "tol = " << format_double(im.residual_tolerance) << "\n"
    << "damping = " << format_double(im.damping) << "\n"
    << "step_tol = " << format_double(im.step_tolerance) << "\n"
    << "max_backtracks = " << im.max_backtracks << "\n";
  o << "\n[output]\n"
    << "dir = " << c.out_dir << "\n"
    << "csv = " << c.csv_name << "\n"
    << "json = " << c.json_name << "\n";
  return o.str();
}

}  // namespace crkfr
