#pragma once

#include <adwr/types.hpp>

#include <memory>
#include <string>

namespace adwr
{
enum class SolverKind
{
  direct,   // UMFPACK when available, otherwise SparseLU
  iterative // BiCGSTAB with ILUT preconditioning
};

SolverKind  parse_solver_kind(const std::string &s);
std::string to_string(SolverKind k);

/// Factorize once, solve many. Solutions are checked against the residual
/// contract (1e-12 relative for direct after refinement, 1e-10 iterative).
class LinearSolver
{
public:
  explicit LinearSolver(SolverKind kind = SolverKind::direct);
  ~LinearSolver();
  LinearSolver(LinearSolver &&) noexcept;
  LinearSolver &operator=(LinearSolver &&) noexcept;

  void   factorize(const SparseMatrix &A);
  Vector solve(const Vector &b) const;

  /// Relative residual of the last solve.
  double
  last_residual() const
  {
    return last_residual_;
  }

  static const char *direct_backend();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SolverKind            kind_;
  mutable double        last_residual_ = 0;
};

Vector sparse_solve(const SparseMatrix &A, const Vector &b, SolverKind kind = SolverKind::direct);

} // namespace adwr
