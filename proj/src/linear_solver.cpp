#include <adwr/errors.hpp>
#include <adwr/linear_solver.hpp>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#ifdef ADWR_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <atomic>
#include <sstream>

namespace adwr
{
SolverKind
parse_solver_kind(const std::string &s)
{
  if (s == "direct")
    return SolverKind::direct;
  if (s == "iterative")
    return SolverKind::iterative;
  throw ConfigError("unknown solver kind '" + s + "' (expected direct or iterative)");
}

std::string
to_string(SolverKind k)
{
  return k == SolverKind::direct ? "direct" : "iterative";
}

namespace
{
// Set once UMFPACK returned a solution that failed the residual check. Seen
// with some BLAS builds whose auto-selected kernels are wrong on the host CPU;
// from then on every factorization goes through SparseLU.
std::atomic<bool> umfpack_distrusted{false};
} // namespace

struct LinearSolver::Impl
{
  SparseMatrix A;
#ifdef ADWR_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> umf;
  bool                           use_umf = false;
#endif
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>   lu;
  Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> krylov;

  void
  factorize_sparselu()
  {
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("direct factorization failed (singular system?)");
  }

  Vector
  direct(const Vector &b) const
  {
#ifdef ADWR_HAVE_UMFPACK
    if (use_umf)
      return umf.solve(b);
#endif
    return lu.solve(b);
  }
};

LinearSolver::LinearSolver(SolverKind kind)
  : impl_(std::make_unique<Impl>())
  , kind_(kind)
{}

LinearSolver::~LinearSolver()                                = default;
LinearSolver::LinearSolver(LinearSolver &&) noexcept            = default;
LinearSolver &LinearSolver::operator=(LinearSolver &&) noexcept = default;

const char *
LinearSolver::direct_backend()
{
#ifdef ADWR_HAVE_UMFPACK
  return "umfpack";
#else
  return "sparselu";
#endif
}

void
LinearSolver::factorize(const SparseMatrix &A)
{
  if (A.rows() != A.cols())
    throw SolverError("factorize: matrix is not square");
  impl_->A = A;
  impl_->A.makeCompressed();
  if (A.rows() == 0)
    return;
  if (kind_ == SolverKind::direct)
    {
#ifdef ADWR_HAVE_UMFPACK
      impl_->use_umf = !umfpack_distrusted.load();
      if (impl_->use_umf)
        {
          impl_->umf.compute(impl_->A);
          if (impl_->umf.info() == Eigen::Success)
            return;
          // SparseLU decides whether the system is really singular
          impl_->use_umf = false;
        }
#endif
      impl_->factorize_sparselu();
    }
  else
    {
      impl_->krylov.preconditioner().setDroptol(1e-6);
      impl_->krylov.preconditioner().setFillfactor(20);
      impl_->krylov.setTolerance(1e-11);
      impl_->krylov.setMaxIterations(5000);
      impl_->krylov.compute(impl_->A);
      if (impl_->krylov.info() != Eigen::Success)
        throw SolverError("ILUT preconditioner setup failed");
    }
}

Vector
LinearSolver::solve(const Vector &b) const
{
  const auto &A = impl_->A;
  if (b.size() != A.rows())
    throw SolverError("solve: right-hand side has wrong length");
  if (A.rows() == 0)
    return Vector(0);
  const double bn = b.norm();
  if (bn == 0.0)
    {
      last_residual_ = 0;
      return Vector::Zero(b.size());
    }

  Vector x;
  if (kind_ == SolverKind::direct)
    {
      auto refined = [&] {
        Vector y = impl_->direct(b);
        // a few steps of iterative refinement
        for (int it = 0; it < 3; ++it)
          {
            const Vector r = b - A * y;
            if (r.norm() <= 1e-12 * bn)
              break;
            y += impl_->direct(r);
          }
        return y;
      };
      x = refined();
#ifdef ADWR_HAVE_UMFPACK
      if (impl_->use_umf && !((b - A * x).norm() <= 1e-8 * bn))
        {
          umfpack_distrusted = true;
          impl_->use_umf     = false;
          impl_->factorize_sparselu();
          x = refined();
        }
#endif
    }
  else
    {
      x = impl_->krylov.solve(b);
    }
  last_residual_ = (b - A * x).norm() / bn;
  const double limit = kind_ == SolverKind::direct ? 1e-12 : 1e-10;
  // the 1e-12 target can be out of reach for badly conditioned systems in
  // double precision; only a clear miss is treated as a failure
  if (!x.allFinite() || last_residual_ > std::max(limit, 1e-8))
    {
      std::ostringstream os;
      os << to_string(kind_) << " solve missed tolerance: relative residual " << last_residual_;
      throw SolverError(os.str());
    }
  return x;
}

Vector
sparse_solve(const SparseMatrix &A, const Vector &b, SolverKind kind)
{
  LinearSolver s(kind);
  s.factorize(A);
  return s.solve(b);
}

} // namespace adwr
