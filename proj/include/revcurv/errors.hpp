#pragma once

#include <stdexcept>
#include <string>

namespace revcurv {

/// Argument outside the domain where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A caller-side precondition (parameter range, closed profile, ...) failed.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quadrature or root finding did not reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// |f'| > 1 somewhere: the profile cannot be parametrized by arclength.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, double t)
      : std::runtime_error(what), t_(t) {}

  double t() const noexcept { return t_; }

 private:
  double t_;
};

/// Curvature requested exactly at a pole, where K = -f''/f is 0/0.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An output file or directory could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Antipodal endpoints have a one-parameter family of minimizing arcs.
class NonUniqueGeodesicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace revcurv
