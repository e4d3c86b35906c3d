// Command-line driver: solve, convergence, reference, list-scenarios.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crkfr/harness.hpp"
#include "crkfr/output.hpp"

namespace {

using namespace crkfr;

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;

RunConfig load(const std::string& path) {
  RunConfig c = load_config(path);
  if (const char* env = std::getenv("THREADS")) {
    try {
      c.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("THREADS='") + env + "' is not an integer");
    }
    if (c.threads < 1) throw ConfigError("THREADS must be at least 1");
  }
  return c;
}

std::vector<int> parse_meshes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad mesh size '" + tok + "'");
    }
  }
  return out;
}

void print_summary(const RunResult& r, const std::pair<std::string, std::string>& paths) {
  std::cout << r.config.scenario << ": t = " << r.t << ", " << r.steps.size() << " steps, " << r.wall_seconds
            << " s\n  " << paths.first << "\n  " << paths.second << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cRKFR IMEX solver for 1-D hyperbolic systems with stiff sources"};
  app.require_subcommand(1);

  std::string config_path, out_dir, meshes = "16,32,64,128";
  int cells = 100000;

  auto* solve = app.add_subcommand("solve", "run one configuration");
  solve->add_option("--config", config_path, "INI config file")->required();
  solve->add_option("--out-dir", out_dir, "output directory (overrides [output] dir)");

  auto* conv = app.add_subcommand("convergence", "L2 error and observed order over a mesh sequence");
  conv->add_option("--config", config_path, "INI config file")->required();
  conv->add_option("--meshes", meshes, "comma-separated element counts, each twice the previous");
  conv->add_option("--out-dir", out_dir, "write convergence.csv here");

  auto* ref = app.add_subcommand("reference", "first-order reference on a fine grid");
  ref->add_option("--config", config_path, "INI config file")->required();
  ref->add_option("--cells", cells, "number of cells");
  ref->add_option("--out-dir", out_dir, "output directory (overrides [output] dir)");

  auto* list = app.add_subcommand("list-scenarios", "print the scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (list->parsed()) {
      for (const auto& name : scenario_names()) std::cout << name << "  " << scenario_by_name(name).description << "\n";
      return 0;
    }
    RunConfig c = load(config_path);
    const std::string dir = out_dir.empty() ? c.out_dir : out_dir;
    if (solve->parsed()) {
      const RunResult r = run(c);
      print_summary(r, write_outputs(r, dir));
    } else if (conv->parsed()) {
      const auto rows = convergence_study(c, parse_meshes(meshes));
      write_convergence_csv(std::cout, rows, c.degree);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "convergence.csv");
        write_convergence_csv(f, rows, c.degree);
      }
    } else if (ref->parsed()) {
      RunResult r = reference_fv_solve(c, cells);
      print_summary(r, write_outputs(r, dir));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
