#pragma once

#include <stdexcept>
#include <string>

namespace netcs {

// Invalid arguments or dimensions. The CLI maps these to exit code 1.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for numerical failures. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (I - Q(0)) is numerically singular.
class IllPosedNetworkError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A matrix required to have full column rank does not.
class CertificateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// No solution of the requested sparsity (or at all) fits the data.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, int iterations)
      : NumericalError(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

// (I - Q22) or (I - D11) singular during a change of resolution.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace netcs
