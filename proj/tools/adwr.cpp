// Command-line driver: runs the adaptive loop of a benchmark config.
#include <adwr/config.hpp>
#include <adwr/errors.hpp>
#include <adwr/output.hpp>
#include <adwr/parallel.hpp>
#include <adwr/vtk.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace adwr;
namespace fs = std::filesystem;

namespace
{
void
write_loop_vtk(const fs::path &dir, const LoopState &st)
{
  const auto  agg = aggregate(st.eta);
  const auto &tp  = st.primal.partition;
  // per-cell temporal indicator summed over intervals
  std::vector<double> tau_cell(st.eta.n_cells, 0.0);
  for (int k = 0; k < st.eta.n_cells; ++k)
    for (int n = 0; n < st.eta.n_intervals; ++n)
      tau_cell[k] += st.eta.eta_tau_local[static_cast<std::size_t>(k) * st.eta.n_intervals + n];
  std::vector<double> lx, ly;
  for (int c : st.mesh.active_cells())
    {
      lx.push_back(st.mesh.cell(c).level[0]);
      ly.push_back(st.mesh.cell(c).level[1]);
    }
  const std::vector<NamedField> cells{{"eta_tau", tau_cell},
                                      {"eta_h_x", agg.cell_h[0]},
                                      {"eta_h_y", agg.cell_h[1]},
                                      {"level_x", lx},
                                      {"level_y", ly}};
  for (int n = 0; n < tp.n_intervals(); ++n)
    {
      const auto path = dir / ("loop_" + std::to_string(st.record.loop) + "_slab_" + std::to_string(n + 1) + ".vtk");
      write_vtk(path.string(), st.mesh,
                {{"u", {st.primal.space, &st.primal.values[n]}}, {"z", {st.adjoint.space, &st.adjoint.values[n]}}},
                cells);
    }
}
} // namespace

int
main(int argc, char **argv)
{
  CLI::App    app{"Anisotropic space-time DWR adaptivity for convection-diffusion-reaction problems"};
  std::string config_path, output_dir;
  int         max_loops = 0, threads = 0;
  bool        emit_vtk = false;
  app.add_option("--config", config_path, "INI run configuration")->required();
  app.add_option("--max-loops", max_loops, "override [adaptivity] max_loops")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "override [output] directory");
  app.add_option("--threads", threads, "override [output] threads")->check(CLI::PositiveNumber);
  app.add_flag("--emit-vtk", emit_vtk, "write loop_<l>_slab_<n>.vtk files");
  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::CallForHelp &e)
    {
      return app.exit(e);
    }
  catch (const CLI::ParseError &e)
    {
      app.exit(e);
      return 2;
    }

  RunConfig cfg;
  DwrSetup  setup{.mesh = create_rectangle_mesh({0, 1}, {0, 1}, 1, 1)};
  try
    {
      cfg = load_config(config_path);
      if (max_loops > 0)
        cfg.adapt.max_loops = max_loops;
      if (!output_dir.empty())
        cfg.output_dir = output_dir;
      if (threads > 0)
        cfg.threads = threads;
      if (emit_vtk)
        cfg.emit_vtk = true;
      setup = make_setup(cfg);
    }
  catch (const ConfigError &e)
    {
      std::cerr << "config error: " << e.what() << '\n' << app.help();
      return 2;
    }
  catch (const Error &e)
    {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    }

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    {
      std::cerr << "cannot create output directory " << dir << ": " << ec.message() << '\n';
      return 2;
    }
  set_num_threads(cfg.threads);

  const bool              hemker = cfg.benchmark == BenchmarkKind::hemker;
  std::vector<LoopRecord> done;
  auto on_loop = [&](const LoopState &st) {
    done.push_back(st.record);
    {
      std::ofstream table(dir / "table.csv");
      write_table(table, done);
    }
    std::fprintf(stderr, "loop %2d  N_space %8ld  N_t %3d  eta_tau_h % .3e  I_eff %s  (%.1f s)\n", st.record.loop,
                 st.record.n_space, st.record.n_t, st.record.eta_tau_h,
                 std::isfinite(st.record.i_eff) ? std::to_string(st.record.i_eff).c_str() : "-",
                 st.record.wall_time);
    if (cfg.emit_vtk)
      write_loop_vtk(dir, st);
    if (hemker)
      {
        const Vector &uT = st.primal.final_value();
        std::ofstream cut(dir / "cutlines.csv");
        write_cut_lines(cut, hemker_cut_lines(st.primal_space, uT));
        try
          {
            std::fprintf(stderr, "          y_layer %.3e\n", boundary_layer_width(st.primal_space, uT));
          }
        catch (const NotFoundError &e)
          {
            std::fprintf(stderr, "          y_layer not resolved: %s\n", e.what());
          }
      }
  };

  try
    {
      run_dwr_loop(std::move(setup), cfg.adapt, on_loop);
    }
  catch (const SolverError &e)
    {
      std::cerr << "solver failure: " << e.what() << '\n';
      return 1;
    }
  catch (const Error &e)
    {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  return 0;
}
