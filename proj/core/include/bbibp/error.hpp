#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbibp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A time or parameter lies outside the domain of a formula (e.g. t in {0,1}).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A discretization is too coarse for the requested operation.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A direction function's support is incompatible with a mollifier scale.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// A computation produced or consumed a NaN or infinity.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Path-functional returned a non-finite value; carries the path index.
class NonFinitePathError : public NonFiniteError {
 public:
  NonFinitePathError(std::size_t path_index, const std::string& what);
  std::size_t path_index() const noexcept { return path_index_; }

 private:
  std::size_t path_index_;
};

/// A memory or size budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction arguments (bad sizes, failed self-checks, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace bbibp
