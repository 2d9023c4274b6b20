#pragma once

#include <stdexcept>
#include <string>

namespace qjunction {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidTruncation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input expected to be (anti-)Hermitian was not; carries the measured defect.
class HermiticityViolation : public Error {
 public:
  HermiticityViolation(const std::string& what, double asymmetry)
      : Error(what), asymmetry_(asymmetry) {}
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class NonuniqueSteadyState : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  /// Relative error estimate reached before giving up.
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class StiffnessError : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class UnsupportedAsymmetry : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace qjunction
