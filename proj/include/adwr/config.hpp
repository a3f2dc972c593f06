#pragma once

#include <adwr/adaptivity.hpp>

#include <optional>
#include <string>
#include <vector>

namespace adwr
{
enum class BenchmarkKind
{
  moving_hump,
  hemker,
  manufactured
};

BenchmarkKind parse_benchmark(const std::string &s);
std::string   to_string(BenchmarkKind k);

/// Everything a run needs. Unset optionals take the benchmark defaults.
struct RunConfig
{
  BenchmarkKind         benchmark = BenchmarkKind::moving_hump;
  std::optional<double> epsilon;
  std::optional<double> delta0;
  int                   degree      = 1;
  int                   time_degree = 0;
  std::optional<double> final_time;
  bool                  extruded = false; // manufactured only

  std::optional<int> cells;       // base grid cells per direction (rectangles)
  std::optional<int> refinements; // global refinements of the base mesh
  std::optional<int> intervals;

  std::vector<GoalFunctional> goals; // empty: benchmark goals
  std::vector<double>         weights;
  std::optional<double>       cutoff; // overrides the default cutoff of the first benchmark goal
  std::optional<double>       cutoff_2;

  AdaptConfig adapt;

  std::string output_dir = "output";
  bool        emit_vtk   = false;
  int         threads    = 1;
};

/// Reads an INI file. Unknown sections or keys raise ConfigError.
RunConfig load_config(const std::string &path);
RunConfig parse_config(std::istream &in);

/// Builds mesh, partition, problem and goals.
DwrSetup make_setup(const RunConfig &cfg);

} // namespace adwr
