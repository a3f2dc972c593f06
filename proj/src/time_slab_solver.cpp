#include <adwr/errors.hpp>
#include <adwr/time_slab_solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace adwr
{
TimePartition::TimePartition(std::vector<double> points)
  : t_(std::move(points))
{
  if (t_.size() < 2)
    throw PreconditionError("TimePartition: need at least one interval");
  for (std::size_t i = 1; i < t_.size(); ++i)
    if (!(t_[i] > t_[i - 1]))
      throw PreconditionError("TimePartition: points must increase strictly");
}

TimePartition
TimePartition::uniform(double T, int n)
{
  if (n < 1 || !(T > 0))
    throw PreconditionError("TimePartition::uniform: need T > 0 and n >= 1");
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; ++i)
    t[i] = T * i / n;
  t[n] = T;
  return TimePartition(std::move(t));
}

void
TimePartition::bisect(const std::vector<int> &intervals)
{
  std::vector<int> ids(intervals);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<double> t;
  t.reserve(t_.size() + ids.size());
  std::size_t k = 0;
  for (int i = 0; i < n_intervals(); ++i)
    {
      t.push_back(t_[i]);
      if (k < ids.size() && ids[k] == i)
        {
          t.push_back(midpoint(i));
          ++k;
        }
    }
  t.push_back(t_.back());
  t_ = std::move(t);
}

namespace
{
// Factorization for the last step size seen. Only one is kept alive: the
// 2p adjoint factors dominate memory on fine meshes, and graded partitions
// come in runs of equal steps anyway.
struct StepCache
{
  double       tau = std::numeric_limits<double>::quiet_NaN();
  LinearSolver solver;

  explicit StepCache(SolverKind kind)
    : solver(kind)
  {}

  template <typename Build>
  LinearSolver &
  get(double t, Build &&build)
  {
    if (t != tau)
      {
        tau = std::numeric_limits<double>::quiet_NaN();
        solver.factorize(build());
        tau = t;
      }
    return solver;
  }
};

// M + Sb and the time-averaged A + S of one interval
struct SlabMatrices
{
  SparseMatrix coupling;
  SparseMatrix operator_avg;
};

SlabMatrices
slab_matrices(const LocalForms &forms, double t0, double tau, bool steady)
{
  SlabMatrices m;
  m.coupling = assemble_matrix(forms, t0, [](const LocalOperators &o) { return LocalMatrix(o.M + o.Sb); });
  if (steady)
    {
      m.operator_avg = assemble_matrix(forms, t0, [](const LocalOperators &o) { return LocalMatrix(o.A + o.S); });
      return m;
    }
  const auto &tr = time_rule();
  for (int g = 0; g < 2; ++g)
    {
      SparseMatrix a = assemble_matrix(forms, t0 + tau * tr.points[g],
                                       [](const LocalOperators &o) { return LocalMatrix(o.A + o.S); });
      m.operator_avg = g == 0 ? SparseMatrix(tr.weights[0] * a) : SparseMatrix(m.operator_avg + tr.weights[g] * a);
    }
  return m;
}

// sum_g tau w_g (F + F_s)(t_g)
Vector
slab_load(const LocalForms &forms, double t0, double tau)
{
  const auto &tr = time_rule();
  return assemble_vector(forms, [&](const LocalForms &lf, const LocalForms::Workspace &ws) {
    LocalVector v = LocalVector::Zero(ws.cv.n_dofs());
    for (int g = 0; g < 2; ++g)
      {
        const double t = t0 + tau * tr.points[g];
        v += tau * tr.weights[g] * (lf.load(ws, t) + lf.supg_load(ws, t));
      }
    return v;
  });
}
} // namespace

SlabSolution
solve_primal(const FeSpace &space,
             const CdrProblem &problem,
             const Discretization &disc,
             const TimePartition &partition,
             const SolverOptions &opts)
{
  const LocalForms forms(space, problem, disc);
  const auto      &cs = space.constraints();
  const SparseMatrix &C = cs.expansion();
  const SparseMatrix  Ct = C.transpose();
  const bool          steady = problem.steady_coefficients;

  SlabSolution sol;
  sol.space     = &space;
  sol.partition = partition;
  sol.values.resize(partition.n_intervals());

  const Vector initial = assemble_vector(forms, [](const LocalForms &lf, const LocalForms::Workspace &ws) {
    return LocalVector(lf.initial(ws) + lf.initial_supg(ws));
  });

  SlabMatrices                  steady_mats;
  StepCache                      cache(opts.kind);
  if (steady)
    steady_mats = slab_matrices(forms, 0.0, 0.0, true);

  for (int i = 0; i < partition.n_intervals(); ++i)
    {
      const double t0 = partition.start(i), tau = partition.tau(i);
      SlabMatrices local;
      const SlabMatrices &mats = steady ? steady_mats : (local = slab_matrices(forms, t0, tau, false));
      const SparseMatrix B = mats.coupling + tau * mats.operator_avg;

      Vector rhs = slab_load(forms, t0, tau);
      rhs += i == 0 ? initial : Vector(mats.coupling * sol.values[i - 1]);

      const Vector lift = cs.dirichlet_lift() * space.dirichlet_values(problem.dirichlet, partition.end(i));
      const Vector rf   = Ct * (rhs - B * lift);

      LinearSolver  fresh(opts.kind);
      LinearSolver *solver = &fresh;
      if (steady)
        {
          solver = &cache.get(tau, [&] { return SparseMatrix(Ct * B * C); });
        }
      else
        fresh.factorize(SparseMatrix(Ct * B * C));

      try
        {
          sol.values[i] = C * solver->solve(rf) + lift;
        }
      catch (const SolverError &e)
        {
          throw SolverError(std::string("primal: ") + e.what(), i + 1);
        }
    }
  return sol;
}

SlabSolution
solve_adjoint(const FeSpace &space,
              const CdrProblem &problem,
              const Discretization &disc,
              const TimePartition &partition,
              const std::vector<Vector> &goal_loads,
              const SolverOptions &opts)
{
  const int N = partition.n_intervals();
  if (static_cast<int>(goal_loads.size()) != N)
    throw PreconditionError("solve_adjoint: one goal load per interval required");

  const LocalForms    forms(space, problem, disc);
  const auto         &cs = space.constraints();
  const SparseMatrix &C  = cs.expansion();
  const SparseMatrix  Ct = C.transpose();
  const bool          steady = problem.steady_coefficients;

  SlabSolution sol;
  sol.space     = &space;
  sol.partition = partition;
  sol.values.resize(N);

  SlabMatrices                   steady_mats;
  StepCache                      cache(opts.kind);
  if (steady)
    steady_mats = slab_matrices(forms, 0.0, 0.0, true);

  SparseMatrix next_coupling; // coupling of interval i+1, transposed action
  for (int i = N - 1; i >= 0; --i)
    {
      const double t0 = partition.start(i), tau = partition.tau(i);
      SlabMatrices local;
      const SlabMatrices &mats = steady ? steady_mats : (local = slab_matrices(forms, t0, tau, false));

      Vector rhs = goal_loads[i];
      if (rhs.size() != space.n_dofs())
        throw PreconditionError("solve_adjoint: goal load has wrong length");
      if (i + 1 < N)
        rhs += (steady ? steady_mats.coupling : next_coupling).transpose() * sol.values[i + 1];

      const Vector rf = Ct * rhs;
      auto         system = [&] {
        const SparseMatrix Bt = SparseMatrix((mats.coupling + tau * mats.operator_avg).transpose());
        return SparseMatrix(Ct * Bt * C);
      };

      LinearSolver  fresh(opts.kind);
      LinearSolver *solver = &fresh;
      if (steady)
        {
          solver = &cache.get(tau, system);
        }
      else
        fresh.factorize(system());

      try
        {
          sol.values[i] = C * solver->solve(rf);
        }
      catch (const SolverError &e)
        {
          throw SolverError(std::string("adjoint: ") + e.what(), i + 1);
        }
      if (!steady)
        next_coupling = mats.coupling;
    }
  return sol;
}

} // namespace adwr
