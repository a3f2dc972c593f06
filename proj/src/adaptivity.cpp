#include <adwr/adaptivity.hpp>
#include <adwr/errors.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace adwr
{
Aggregates
aggregate(const ErrorIndicators &eta)
{
  Aggregates a;
  a.cell_h[0]    = eta.cell_eta_h(Axis::x);
  a.cell_h[1]    = eta.cell_eta_h(Axis::y);
  a.interval_tau = eta.interval_eta_tau();
  return a;
}

std::vector<int>
top_fraction(const std::vector<double> &v, double theta, double floor_abs)
{
  if (theta < 0 || theta > 1)
    throw PreconditionError("marking fraction must lie in [0,1]");
  const int n    = static_cast<int>(v.size());
  const int want = static_cast<int>(std::ceil(theta * n - 1e-12));
  double    vmax = 0;
  for (double x : v)
    vmax = std::max(vmax, std::abs(x));
  if (want == 0 || !(vmax > floor_abs))
    return {};

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return std::abs(v[a]) > std::abs(v[b]); });
  std::vector<int> out;
  for (int i = 0; i < n && static_cast<int>(out.size()) < want; ++i)
    if (std::abs(v[idx[i]]) > floor_abs)
      out.push_back(idx[i]);
  std::sort(out.begin(), out.end());
  return out;
}

Marks
mark(const Aggregates &agg,
     const std::vector<int> &active_cells,
     const AdaptConfig &config,
     double eta_h,
     double eta_tau)
{
  Marks  m;
  double hmax = 0;
  for (const auto &v : agg.cell_h)
    for (double x : v)
      hmax = std::max(hmax, std::abs(x));
  for (int d = 0; d < 2; ++d)
    for (int k : top_fraction(agg.cell_h[d], config.theta_h, config.eligibility * hmax))
      m.spatial.push_back({active_cells[k], static_cast<Axis>(d)});
  std::sort(m.spatial.begin(), m.spatial.end(), [](const RefinementMark &a, const RefinementMark &b) {
    return a.cell != b.cell ? a.cell < b.cell : index(a.axis) < index(b.axis);
  });
  if (std::abs(eta_tau) > config.tau_floor * std::abs(eta_h))
    {
      double tmax = 0;
      for (double x : agg.interval_tau)
        tmax = std::max(tmax, std::abs(x));
      m.temporal = top_fraction(agg.interval_tau, config.theta_tau, config.eligibility * tmax);
    }
  return m;
}

namespace
{
std::vector<double>
sign_weights(const SlabSolution &u, const FeSpace &qs, const PatchSet &patches, const CombinedGoal &goal)
{
  const auto          hi = higher_order_goal_values(u, qs, patches, goal);
  std::vector<double> w(goal.goals.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = hi[i] - goal.goals[i].evaluate(u) < 0 ? -1.0 : 1.0;
  return w;
}
} // namespace

std::vector<LoopRecord>
run_dwr_loop(DwrSetup s, const AdaptConfig &config, const std::function<void(const LoopState &)> &on_loop)
{
  if (config.theta_h < 0 || config.theta_h > 1 || config.theta_tau < 0 || config.theta_tau > 1)
    throw PreconditionError("run_dwr_loop: marking fractions must lie in [0,1]");
  if (config.max_loops < 1)
    throw PreconditionError("run_dwr_loop: max_loops must be positive");

  const auto    ids = s.problem.dirichlet_ids();
  SolverOptions opts{config.solver};

  // exact goal values per goal; weights may change in sign-rule mode
  std::vector<double> exact_values;
  if (s.exact)
    for (const auto &g : s.goal.goals)
      exact_values.push_back(g.evaluate_exact(*s.exact, s.problem.T, &s.mesh));

  std::vector<LoopRecord> records;
  for (int loop = 1; loop <= config.max_loops; ++loop)
    {
      const auto    start = std::chrono::steady_clock::now();
      const FeSpace ps(s.mesh, s.disc.degree, ids);
      const FeSpace qs(s.mesh, 2 * s.disc.degree, ids);
      const auto    patches = s.mesh.build_patches();

      SlabSolution u, z;
      try
        {
          u = solve_primal(ps, s.problem, s.disc, s.partition, opts);
          if (config.weight_mode == WeightMode::sign_rule)
            s.goal.weights = sign_weights(u, qs, patches, s.goal);
          z = solve_adjoint(qs, s.problem, s.disc, s.partition, s.goal.adjoint_loads(qs, s.partition), opts);
        }
      catch (const SolverError &e)
        {
          throw SolverError("loop " + std::to_string(loop) + ": " + e.what());
        }
      const auto eta = estimate(u, z, s.problem, s.disc, s.goal, patches);

      LoopRecord r;
      r.loop    = loop;
      r.n_space = ps.n_dofs();
      r.n_t     = s.partition.n_intervals();
      r.n_tot   = r.n_space * r.n_t;
      for (const auto &g : s.goal.goals)
        r.goal_values.push_back(g.evaluate(u));
      for (std::size_t i = 0; i < r.goal_values.size(); ++i)
        r.goal_value += s.goal.weights[i] * r.goal_values[i];
      if (s.exact)
        {
          double e = 0;
          for (std::size_t i = 0; i < exact_values.size(); ++i)
            e += s.goal.weights[i] * (exact_values[i] - r.goal_values[i]);
          r.error = e;
          r.i_eff = effectivity_index(eta, e);
        }
      r.eta_h_x   = eta.eta_h_dir[0];
      r.eta_h_y   = eta.eta_h_dir[1];
      r.eta_h     = eta.eta_h();
      r.eta_tau   = eta.eta_tau;
      r.eta_tau_h = eta.eta_tau_h();
      r.ar_max    = s.mesh.max_aspect_ratio();

      const bool last = loop == config.max_loops || std::abs(r.eta_tau_h) < config.stop_tolerance ||
                        (config.max_total_dofs > 0 && r.n_tot >= config.max_total_dofs);
      Marks marks;
      if (!last)
        marks = mark(aggregate(eta), s.mesh.active_cells(), config, r.eta_h, r.eta_tau);
      r.n_time_marks = static_cast<int>(marks.temporal.size());
      r.wall_time    = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      records.push_back(r);
      if (on_loop)
        on_loop(LoopState{s.mesh, ps, u, z, eta, records.back()});
      if (last)
        break;

      records.back().refinement = s.mesh.refine(marks.spatial, config.patch_smoothing);
      s.partition.bisect(marks.temporal);
    }
  return records;
}

} // namespace adwr
