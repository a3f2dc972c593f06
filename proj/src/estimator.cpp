#include <adwr/errors.hpp>
#include <adwr/estimator.hpp>
#include <adwr/parallel.hpp>
#include <adwr/quadrature.hpp>

#include <cmath>
#include <limits>

namespace adwr
{
namespace
{
// Kronecker product for x-fastest tensor indexing: (Y (x) X)
LocalMatrix
tensor(const LocalMatrix &X, const LocalMatrix &Y)
{
  LocalMatrix R(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (int b = 0; b < Y.rows(); ++b)
    for (int bb = 0; bb < Y.cols(); ++bb)
      R.block(b * X.rows(), bb * X.cols(), X.rows(), X.cols()) = Y(b, bb) * X;
  return R;
}

LocalVector
gather(const Vector &u, const std::vector<int> &dofs)
{
  LocalVector v(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i)
    v[i] = u[dofs[i]];
  return v;
}
} // namespace

LocalInterpolation::LocalInterpolation(int p)
  : p_(p)
{
  if (p < 1)
    throw PreconditionError("LocalInterpolation: p must be at least 1");
  const auto glp = gauss_lobatto_points(p);
  const auto glq = gauss_lobatto_points(2 * p);
  const LagrangeBasis1D lp(glp), lq(glq);
  const int np = p + 1, nq = 2 * p + 1;

  embed1_.resize(nq, np);
  for (int a = 0; a < nq; ++a)
    for (int b = 0; b < np; ++b)
      embed1_(a, b) = lp.value(b, glq[a]);
  restr1_.resize(np, nq);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < nq; ++b)
      restr1_(a, b) = lq.value(b, glp[a]);
  const LocalMatrix r1 = embed1_ * restr1_;
  const LocalMatrix Iq = LocalMatrix::Identity(nq, nq);

  embed_    = tensor(embed1_, embed1_);
  restrict_ = tensor(restr1_, restr1_);
  rh_       = embed_ * restrict_;
  rdir_[0]  = tensor(r1, Iq);
  rdir_[1]  = tensor(Iq, r1);

  // patch nodes: both children's p-nodes, shared middle node once
  std::vector<double> pn;
  for (int a = 0; a <= p; ++a)
    pn.push_back(0.5 * glp[a]);
  for (int a = 1; a <= p; ++a)
    pn.push_back(0.5 + 0.5 * glp[a]);
  const LagrangeBasis1D lpatch(pn);
  for (int pos = 0; pos < 2; ++pos)
    {
      patch1_[pos].resize(nq, 2 * p + 1);
      for (int a = 0; a < nq; ++a)
        for (int b = 0; b < 2 * p + 1; ++b)
          patch1_[pos](a, b) = lpatch.value(b, 0.5 * pos + 0.5 * glq[a]);
    }
}

LocalMatrix
LocalInterpolation::one_d(int shape, int pos, bool lift) const
{
  if (shape == 2 && lift)
    return patch1_[pos];
  if (shape == 2)
    {
      LocalMatrix T = LocalMatrix::Zero(2 * p_ + 1, 2 * p_ + 1);
      T.middleCols(pos * p_, p_ + 1) = embed1_;
      return T;
    }
  return embed1_;
}

LocalVector
LocalInterpolation::patch_to_child(const std::vector<double> &values,
                                   const std::array<int, 2> &shape,
                                   const std::array<int, 2> &pos,
                                   const std::array<bool, 2> &lift) const
{
  const LocalMatrix Tx = one_d(shape[0], pos[0], lift[0]);
  const LocalMatrix Ty = one_d(shape[1], pos[1], lift[1]);
  if (static_cast<std::size_t>(Tx.cols() * Ty.cols()) != values.size())
    throw PreconditionError("patch_to_child: value count does not match patch shape");
  const Eigen::Map<const LocalMatrix> V(values.data(), Tx.cols(), Ty.cols());
  const LocalMatrix                   R = Tx * V * Ty.transpose();
  return Eigen::Map<const LocalVector>(R.data(), R.size());
}

std::array<int, 2>
child_position(const AnisoQuadMesh &, const Patch &patch, int cell)
{
  if (patch.exception())
    return {0, 0};
  int idx = 0;
  while (patch.cells[idx] != cell)
    ++idx;
  if (patch.shape[0] == 2 && patch.shape[1] == 2)
    return {idx % 2, idx / 2};
  if (patch.shape[0] == 2)
    return {idx, 0};
  return {0, idx};
}

std::vector<double>
gather_patch(const FeSpace &pspace, const Patch &patch, const Vector &u)
{
  const int p  = pspace.degree();
  const int nx = patch.shape[0] == 2 ? 2 * p + 1 : p + 1;
  const int ny = patch.shape[1] == 2 ? 2 * p + 1 : p + 1;
  std::vector<double> v(static_cast<std::size_t>(nx) * ny);
  for (int c : patch.cells)
    {
      const auto  pos  = child_position(pspace.mesh(), patch, c);
      const auto &dofs = pspace.cell_dofs(pspace.active_index(c));
      for (int b = 0; b <= p; ++b)
        for (int a = 0; a <= p; ++a)
          v[(pos[0] * p + a) + nx * (pos[1] * p + b)] = u[dofs[a + (p + 1) * b]];
    }
  return v;
}

std::vector<LocalVector>
interpolate_patch(const FeSpace &pspace, const PatchSet &patches, const Vector &u, std::optional<Axis> dir)
{
  const LocalInterpolation li(pspace.degree());
  std::vector<LocalVector> out(pspace.n_cells());
  const std::array<bool, 2> lift = dir ? std::array<bool, 2>{*dir == Axis::x, *dir == Axis::y}
                                       : std::array<bool, 2>{true, true};
  for (const auto &patch : patches.patches)
    {
      if (patch.exception())
        {
          const int k = pspace.active_index(patch.cells[0]);
          out[k]      = li.embed() * gather(u, pspace.cell_dofs(k));
          continue;
        }
      const auto vals = gather_patch(pspace, patch, u);
      for (int c : patch.cells)
        out[pspace.active_index(c)] =
          li.patch_to_child(vals, patch.shape, child_position(pspace.mesh(), patch, c), lift);
    }
  return out;
}

Vector
restrict_degree(const FeSpace &qspace, const FeSpace &pspace, const Vector &z)
{
  const LocalInterpolation li(pspace.degree());
  if (qspace.degree() != li.q())
    throw PreconditionError("restrict_degree: adjoint space must have degree 2p");
  Vector r = Vector::Zero(pspace.n_dofs());
  for (int k = 0; k < pspace.n_cells(); ++k)
    {
      const LocalVector  v = li.restrict_p() * gather(z, qspace.cell_dofs(k));
      const auto        &d = pspace.cell_dofs(k);
      for (int i = 0; i < v.size(); ++i)
        r[d[i]] = v[i];
    }
  return r;
}

Vector
restrict_directional(const FeSpace &qspace, int p, const Vector &z, Axis dir)
{
  const LocalInterpolation li(p);
  if (qspace.degree() != li.q())
    throw PreconditionError("restrict_directional: adjoint space must have degree 2p");
  Vector r = Vector::Zero(qspace.n_dofs());
  for (int k = 0; k < qspace.n_cells(); ++k)
    {
      const auto        &d = qspace.cell_dofs(k);
      const LocalVector  v = li.restrict_dir(dir) * gather(z, d);
      for (int i = 0; i < v.size(); ++i)
        r[d[i]] = v[i];
    }
  return r;
}

TemporalReconstruction::TemporalReconstruction(const TimePartition &tp)
{
  const int N = tp.n_intervals();
  lines.resize(N);
  if (N == 1)
    {
      identity = true;
      return;
    }
  for (int i = 0; i < N; ++i)
    {
      Line &l      = lines[i];
      l.ia         = i < N - 1 ? i : N - 2;
      l.ib         = l.ia + 1;
      const double ma = tp.midpoint(l.ia), mb = tp.midpoint(l.ib);
      const double sl = (tp.start(i) - ma) / (mb - ma);
      const double sr = (tp.end(i) - ma) / (mb - ma);
      l.left_a  = 1 - sl;
      l.left_b  = sl;
      l.right_a = 1 - sr;
      l.right_b = sr;
    }
}

Vector
TemporalReconstruction::evaluate(const SlabSolution &u, int i, double t) const
{
  if (identity)
    return u.values[i];
  const Line  &l  = lines[i];
  const double ma = u.partition.midpoint(l.ia), mb = u.partition.midpoint(l.ib);
  const double s  = (t - ma) / (mb - ma);
  return (1 - s) * u.values[l.ia] + s * u.values[l.ib];
}

std::vector<double>
ErrorIndicators::cell_eta_h(Axis dir) const
{
  std::vector<double> r(n_cells, 0.0);
  const auto         &loc = eta_h_local[index(dir)];
  for (int k = 0; k < n_cells; ++k)
    for (int n = 0; n < n_intervals; ++n)
      r[k] += loc[static_cast<std::size_t>(k) * n_intervals + n];
  return r;
}

std::vector<double>
ErrorIndicators::interval_eta_tau() const
{
  std::vector<double> r(n_intervals, 0.0);
  for (int k = 0; k < n_cells; ++k)
    for (int n = 0; n < n_intervals; ++n)
      r[n] += eta_tau_local[static_cast<std::size_t>(k) * n_intervals + n];
  return r;
}

ErrorIndicators
estimate(const SlabSolution &primal,
         const SlabSolution &adjoint,
         const CdrProblem &problem,
         const Discretization &disc,
         const CombinedGoal &goal,
         const PatchSet &patches)
{
  const FeSpace &ps = *primal.space;
  const FeSpace &qs = *adjoint.space;
  const auto    &tp = primal.partition;
  const int      N  = tp.n_intervals();
  const int      nc = ps.n_cells();
  if (adjoint.partition.points() != tp.points())
    throw PreconditionError("estimate: primal and adjoint partitions differ");
  if (&ps.mesh() != &qs.mesh() || qs.degree() != 2 * ps.degree())
    throw PreconditionError("estimate: adjoint space must be degree 2p on the primal mesh");

  const LocalForms             forms(qs, problem, disc);
  const LocalInterpolation     li(ps.degree());
  const TemporalReconstruction rec(tp);
  const TimeRule              &tr = time_rule();

  // goal derivative per cell, per goal
  const int                                    ng = static_cast<int>(goal.goals.size());
  std::vector<std::vector<const LocalVector *>> jloc(ng, std::vector<const LocalVector *>(nc, nullptr));
  std::vector<CellLoads>                       loads(ng);
  for (int g = 0; g < ng; ++g)
    {
      loads[g] = goal.goals[g].cell_loads(qs);
      for (const auto &[k, v] : loads[g])
        jloc[g][k] = &v;
    }

  ErrorIndicators eta;
  eta.n_cells     = nc;
  eta.n_intervals = N;
  eta.eta_tau_local.assign(static_cast<std::size_t>(nc) * N, 0.0);
  eta.eta_h_local[0].assign(static_cast<std::size_t>(nc) * N, 0.0);
  eta.eta_h_local[1].assign(static_cast<std::size_t>(nc) * N, 0.0);

  parallel_for(0, nc, [&](int k) {
    auto ws = forms.workspace();
    forms.reinit(ws, k);
    const int    cell  = ps.cell_id(k);
    const Patch &patch = patches.patches[patches.patch_of_cell[cell]];
    const auto   pos   = child_position(ps.mesh(), patch, cell);

    std::vector<LocalVector> u(N), z(N), vdir[2];
    vdir[0].resize(N);
    vdir[1].resize(N);
    for (int n = 0; n < N; ++n)
      {
        u[n] = li.embed() * gather(primal.values[n], ps.cell_dofs(k));
        z[n] = gather(adjoint.values[n], qs.cell_dofs(k));
        if (patch.exception())
          {
            vdir[0][n] = LocalVector::Zero(u[n].size());
            vdir[1][n] = LocalVector::Zero(u[n].size());
          }
        else
          {
            const auto vals = gather_patch(ps, patch, primal.values[n]);
            vdir[0][n]      = li.patch_to_child(vals, patch.shape, pos, {true, false}) - u[n];
            vdir[1][n]      = li.patch_to_child(vals, patch.shape, pos, {false, true}) - u[n];
          }
      }
    const LocalVector U0g = forms.initial(ws), U0s = forms.initial_supg(ws);

    LocalOperators steady_ops;
    if (problem.steady_coefficients)
      steady_ops = forms.operators(ws, 0.0);

    const LocalVector zero = LocalVector::Zero(u[0].size());
    for (int n = 0; n < N; ++n)
      {
        const double t0 = tp.start(n), tau = tp.tau(n);
        // operators: jump terms at t0, volume terms at the Gauss times
        LocalOperators ops0, opsg[2];
        if (problem.steady_coefficients)
          ops0 = opsg[0] = opsg[1] = steady_ops;
        else
          {
            ops0    = forms.operators(ws, t0);
            opsg[0] = forms.operators(ws, t0 + tau * tr.points[0]);
            opsg[1] = forms.operators(ws, t0 + tau * tr.points[1]);
          }
        LocalVector Fg[2], Fs[2];
        for (int g = 0; g < 2; ++g)
          {
            const double t = t0 + tau * tr.points[g];
            Fg[g]          = forms.load(ws, t);
            Fs[g]          = forms.supg_load(ws, t);
          }
        const LocalVector &un = u[n];
        const LocalVector  du = n > 0 ? LocalVector(ops0.M * (un - u[n - 1])) : LocalVector(ops0.M * un - U0g);
        const LocalVector  dus =
          n > 0 ? LocalVector(ops0.Sb * (un - u[n - 1])) : LocalVector(ops0.Sb * un - U0s);
        LocalVector Aun[2], Sun[2];
        for (int g = 0; g < 2; ++g)
          {
            Aun[g] = opsg[g].A * un;
            Sun[g] = opsg[g].S * un;
          }

        // rho(u)(w) for w linear in time with end values wl, wr
        auto rho = [&](const LocalVector &wl, const LocalVector &wr) {
          double s = 0;
          for (int g = 0; g < 2; ++g)
            {
              const LocalVector w = wl + tr.points[g] * (wr - wl);
              s += tau * tr.weights[g] * (w.dot(Fg[g]) - w.dot(Aun[g]));
            }
          return s - wl.dot(du);
        };
        // goal functional restricted to this cell and interval
        auto J = [&](const LocalVector &vl, const LocalVector &vr) {
          double s = 0;
          for (int g = 0; g < ng; ++g)
            {
              const LocalVector *j = jloc[g][k];
              if (!j)
                continue;
              const auto &gf = goal.goals[g];
              if (gf.terminal())
                {
                  if (n == N - 1)
                    s += goal.weights[g] * j->dot(vr);
                  continue;
                }
              const double a = std::max(t0, gf.t_begin), b = std::min(t0 + tau, gf.t_end);
              if (b <= a)
                continue;
              const double sm = (0.5 * (a + b) - t0) / tau;
              s += goal.weights[g] * (b - a) * j->dot(vl + sm * (vr - vl));
            }
          return s;
        };
        // rho*(y)(v) for v linear in time, vprev its end value on the previous interval
        auto rho_star = [&](const LocalVector &y, const LocalVector &vl, const LocalVector &vr,
                            const LocalVector &vprev) {
          double s = y.dot(ops0.M * (vr - vprev));
          for (int g = 0; g < 2; ++g)
            s += tau * tr.weights[g] * y.dot(opsg[g].A * (vl + tr.points[g] * (vr - vl)));
          return J(vl, vr) - s;
        };
        // S(u)(phi), phi constant in time
        auto supg = [&](const LocalVector &phi) {
          double s = phi.dot(dus);
          for (int g = 0; g < 2; ++g)
            s += tau * tr.weights[g] * phi.dot(Sun[g] - Fs[g]);
          return s;
        };
        // data-free S'(v)(y) for v constant in time on each interval
        auto supg_lin = [&](const LocalVector &v, const LocalVector &vprev, const LocalVector &y) {
          double s = y.dot(ops0.Sb * (v - vprev));
          for (int g = 0; g < 2; ++g)
            s += tau * tr.weights[g] * y.dot(opsg[g].S * v);
          return s;
        };

        const std::size_t slot = static_cast<std::size_t>(k) * N + n;

        // temporal part
        if (!rec.identity)
          {
            const auto &l  = rec.lines[n];
            const auto  Ez = [&](double a, double b) { return LocalVector(a * z[l.ia] + b * z[l.ib]); };
            const auto  Eu = [&](double a, double b) { return LocalVector(a * u[l.ia] + b * u[l.ib]); };
            const LocalVector wl = Ez(l.left_a, l.left_b) - z[n], wr = Ez(l.right_a, l.right_b) - z[n];
            const LocalVector vl = Eu(l.left_a, l.left_b) - un, vr = Eu(l.right_a, l.right_b) - un;
            LocalVector       vprev = zero;
            if (n > 0)
              {
                const auto &lp = rec.lines[n - 1];
                vprev          = LocalVector(lp.right_a * u[lp.ia] + lp.right_b * u[lp.ib]) - u[n - 1];
              }
            eta.eta_tau_local[slot] = 0.5 * rho(wl, wr) + 0.5 * rho_star(z[n], vl, vr, vprev);
          }

        // directional spatial parts
        const LocalVector yh = li.restrict_h() * z[n];
        for (int d = 0; d < 2; ++d)
          {
            const LocalVector Riz   = li.restrict_dir(static_cast<Axis>(d)) * z[n];
            const LocalVector w     = z[n] - Riz;
            const LocalVector &v    = vdir[d][n];
            const LocalVector &vprev = n > 0 ? vdir[d][n - 1] : zero;
            eta.eta_h_local[d][slot] =
              0.5 * (rho(w, w) + rho_star(yh, v, v, vprev) + supg(Riz) + supg_lin(v, vprev, yh));
          }
      }
  });

  for (std::size_t s = 0; s < eta.eta_tau_local.size(); ++s)
    {
      eta.eta_tau += eta.eta_tau_local[s];
      eta.eta_h_dir[0] += eta.eta_h_local[0][s];
      eta.eta_h_dir[1] += eta.eta_h_local[1][s];
    }
  return eta;
}

double
effectivity_index(const ErrorIndicators &eta, double exact_goal_error)
{
  if (exact_goal_error == 0.0 || !std::isfinite(exact_goal_error))
    return std::numeric_limits<double>::quiet_NaN();
  return std::abs(eta.eta_tau_h() / exact_goal_error);
}

std::vector<double>
higher_order_goal_values(const SlabSolution &primal,
                         const FeSpace &qspace,
                         const PatchSet &patches,
                         const CombinedGoal &goal)
{
  const FeSpace &ps = *primal.space;
  const auto    &tp = primal.partition;
  const int      N  = tp.n_intervals();
  std::vector<std::vector<LocalVector>> lifted(N);
  auto lift = [&](int n) -> const std::vector<LocalVector> & {
    if (lifted[n].empty())
      lifted[n] = interpolate_patch(ps, patches, primal.values[n]);
    return lifted[n];
  };

  std::vector<double> out;
  for (const auto &g : goal.goals)
    {
      const auto loads = g.cell_loads(qspace);
      auto pair = [&](int n) {
        const auto &l = lift(n);
        double      s = 0;
        for (const auto &[k, j] : loads)
          s += j.dot(l[k]);
        return s;
      };
      if (g.terminal())
        out.push_back(pair(N - 1));
      else
        {
          double s = 0;
          for (int n = 0; n < N; ++n)
            {
              const double w = g.window_overlap(tp.start(n), tp.end(n));
              if (w > 0)
                s += w * pair(n);
            }
          out.push_back(s);
        }
    }
  return out;
}

} // namespace adwr
