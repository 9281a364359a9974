#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sympl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive-definite is singular or indefinite.
class DegenerateMatrix : public Error {
 public:
  using Error::Error;
};

/// Propagation requested at a time where the closed-form kernel blows up.
class SingularTime : public Error {
 public:
  using Error::Error;
};

/// The grid cannot resolve the kernel phase; carries the minimum usable size.
class UnderResolvedGrid : public Error {
 public:
  UnderResolvedGrid(const std::string& what, Eigen::Index suggested_size)
      : Error(what), suggested_size(suggested_size) {}
  Eigen::Index suggested_size;
};

/// Numerical blow-up during time integration; carries the last finite time.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time(last_valid_time) {}
  double last_valid_time;
};

class CausticCrossing : public Error {
 public:
  using Error::Error;
};

class GridMisalignment : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class DegenerateHull : public Error {
 public:
  using Error::Error;
};

class UnboundedRegion : public Error {
 public:
  using Error::Error;
};

class DegenerateRegion : public Error {
 public:
  using Error::Error;
};

}  // namespace sympl
