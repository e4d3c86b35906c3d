#include "crkfr/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <ostream>

namespace crkfr {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_solution_csv(std::ostream& out, const RunResult& r) {
  const int n = r.system->n_vars();
  out << "x";
  for (int k = 0; k < n; ++k) out << ",var_" << k;
  out << "\n";
  const std::vector<double> xs = r.node_x();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << format_double(xs[i]);
    for (int k = 0; k < n; ++k) out << ',' << format_double(r.solution[i][k]);
    out << "\n";
  }
}

void write_solution_csv(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  write_solution_csv(out, r);
}

std::string diagnostics_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["steps"] = r.steps.size();
  j["dt_min"] = r.dt_min();
  j["dt_max"] = r.dt_max();
  j["wall_seconds"] = r.wall_seconds;
  j["conservation_drift"] = r.conservation_drift;
  nlohmann::ordered_json mins = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < r.constraint_names.size(); ++k) mins[r.constraint_names[k]] = r.min_constraint_values[k];
  j["min_constraint_values"] = mins;

  j["scenario"] = r.config.scenario;
  j["equation"] = r.config.equation;
  j["t_final"] = r.t;
  j["n_elements"] = r.config.n_elements;
  j["degree"] = r.config.degree;
  int retries = 0;
  double max_alpha = 0.0, min_theta = 1.0, min_w = 1.0;
  for (const auto& s : r.steps) {
    retries += s.retries;
    max_alpha = std::max(max_alpha, s.max_alpha);
    min_theta = std::min({min_theta, s.min_flux_theta, s.min_element_theta});
    min_w = std::min(min_w, s.min_dissipation_weight);
  }
  j["retries"] = retries;
  j["max_alpha"] = max_alpha;
  j["min_theta"] = min_theta;
  j["min_dissipation_weight"] = min_w;
  return j.dump(2);
}

void write_diagnostics_json(const std::string& path, const RunResult& r) {
  auto out = open_out(path);
  out << diagnostics_json(r) << "\n";
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows, int degree) {
  out << "n_elements,h,error,order,N\n";
  for (const auto& row : rows) {
    out << row.n_elements << ',' << format_double(row.h) << ',' << format_double(row.error) << ',';
    if (row.exact)
      out << "exact";
    else if (!std::isnan(row.order))
      out << format_double(row.order);
    out << ',' << degree << "\n";
  }
}

std::pair<std::string, std::string> write_outputs(const RunResult& r, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string csv = (std::filesystem::path(out_dir) / r.config.csv_name).string();
  const std::string json = (std::filesystem::path(out_dir) / r.config.json_name).string();
  write_solution_csv(csv, r);
  write_diagnostics_json(json, r);
  return {csv, json};
}

}  // namespace crkfr
