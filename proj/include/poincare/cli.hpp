#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "poincare/report.hpp"
#include "poincare/types.hpp"

namespace poincare {

// Every numeric default of the command line lives here.
struct Defaults {
  static constexpr double tol = 1e-8;
  static constexpr double step_fraction = 0.25;  // thickness step = step_fraction * h
  static constexpr int samples = 4096;           // boundary samples per fiber
  static constexpr int directions = 512;         // regular-direction candidates
  static constexpr std::uint64_t seed = 0;
  static constexpr double p = 2.0;
  static constexpr int resolution = 256;
  static constexpr int trace_resolution = 128;
  static constexpr int trials = 100;
  static constexpr int grid_points = 5;  // per parameter axis
  static constexpr int samples_per_column = 32;
};

struct RunConfig {
  std::string command;
  std::filesystem::path spec_path;
  std::filesystem::path out_dir = "poincare_out";
  std::vector<ParamVector> t;     // explicit parameter vectors
  std::vector<int> grid;          // per-axis counts (sweeps)
  double p = Defaults::p;
  std::vector<int> resolutions{Defaults::resolution};
  std::string direction = "auto";  // "auto", axis name (e1, x, ...) or "a,b[,c]"
  std::uint64_t seed = Defaults::seed;
  int jobs = 1;
  double tol = Defaults::tol;
  std::optional<double> step;
  int samples = Defaults::samples;
  int directions = Defaults::directions;
  int trials = Defaults::trials;
  int samples_per_column = Defaults::samples_per_column;
  std::string battery = "all";
  std::optional<double> k;
  bool dump_field = false;

  Json to_json() const;
};

enum class ExitCode { Pass = 0, Fail = 1, Usage = 2, Solver = 3 };

// "pass", "fail", "usage_error", "solver_error".
ExitCode exit_code_for(const Json& report);

// Parses a direction flag for an n-dimensional domain; nullopt means AUTO.
std::optional<Direction> parse_direction(const std::string& text, int dim);

// Full command line: parse, execute, write artifacts under --out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// Arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Executes an already parsed configuration and returns the report (also
// written to out_dir/report.json).
Json execute(const RunConfig& config);

}  // namespace poincare
