#pragma once

#include <stdexcept>
#include <string>

namespace foldnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ManifoldError : public Error {
 public:
  using Error::Error;
};

class OrientationError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Raised by verify() when a replayed step breaks a predicate.
class VerificationError : public Error {
 public:
  VerificationError(int step, std::string predicate, const std::string& what)
      : Error(what), step_(step), predicate_(std::move(predicate)) {}
  int step() const { return step_; }
  const std::string& predicate() const { return predicate_; }

 private:
  int step_;
  std::string predicate_;
};

// Raised when an operation is asked to work on an infeasible input
// (overlapping net, unverified plan).
class RefusedError : public Error {
 public:
  using Error::Error;
};

}  // namespace foldnet
