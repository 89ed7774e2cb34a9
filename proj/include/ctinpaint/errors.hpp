#pragma once

#include <stdexcept>
#include <string>

namespace ctinpaint {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimensions, empty sets, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A distance field has interior local minima and cannot drive a fill.
class InadmissibleField : public Error {
public:
  using Error::Error;
};

/// The linear solver did not reach the requested residual.
class SolverError : public Error {
public:
  using Error::Error;
};

/// A pixel had no known neighbor when it was due to be filled.
class StarvedPixel : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace ctinpaint
