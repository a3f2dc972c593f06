#pragma once

#include <stdexcept>
#include <string>

namespace adwr
{
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Degenerate ranges, singular or inverted cell mappings.
class GeometryError : public Error
{
public:
  using Error::Error;
};

/// Refinement mark on a cell that is no longer active.
class StaleMarkError : public Error
{
public:
  using Error::Error;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Factorization breakdown or residual above tolerance.
class SolverError : public Error
{
public:
  SolverError(const std::string &what, int slab = -1)
    : Error(slab < 0 ? what : what + " (slab " + std::to_string(slab) + ")")
    , slab_(slab)
  {}

  int
  slab() const
  {
    return slab_;
  }

private:
  int slab_;
};

class NotFoundError : public Error
{
public:
  using Error::Error;
};

/// Inverse mapping (Newton) did not converge.
class MappingError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

} // namespace adwr
