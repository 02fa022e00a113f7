#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fixkit {

// Base for every error raised by the library. Violations of mathematical
// conditions are reported as data (reports, certificates); exceptions are
// reserved for broken preconditions and aborted computations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A point set that must be nonempty was empty.
class EmptySetError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// An exhaustive enumeration was requested on an instance above its size bound.
class SizeLimitError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A point identifier outside the host space.
class UnknownPointError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A map specification is not total, has empty images or leaves the space.
class MapSpecError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Two functions defined over different state sets were combined.
class MismatchError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// A gauge returned a negative or non-finite value.
class GaugeEvaluationError : public Error {
 public:
  GaugeEvaluationError(const std::string& what, double at)
      : Error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

// A gauge failed the sampled property check required by an operation.
class GaugeRejected : public PreconditionError {
 public:
  GaugeRejected(const std::string& what, double at)
      : PreconditionError(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

// A gauge potential was evaluated where g(d)/d approaches one.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, std::size_t x, std::size_t y,
                   double ratio)
      : Error(what), x_(x), y_(y), ratio_(ratio) {}
  std::size_t x() const noexcept { return x_; }
  std::size_t y() const noexcept { return y_; }
  double ratio() const noexcept { return ratio_; }

 private:
  std::size_t x_;
  std::size_t y_;
  double ratio_;
};

// A runtime assertion inside an iterative solve did not hold.
class SolverAbort : public Error {
 public:
  SolverAbort(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// A Bellman recursion produced a non-finite value at (state, decision).
class NonFiniteValueError : public Error {
 public:
  NonFiniteValueError(const std::string& what, std::size_t state,
                      std::size_t decision)
      : Error(what), state_(state), decision_(decision) {}
  std::size_t state() const noexcept { return state_; }
  std::size_t decision() const noexcept { return decision_; }

 private:
  std::size_t state_;
  std::size_t decision_;
};

// A solver refused to run because its certification gate failed.
class GateRefusal : public Error {
 public:
  using Error::Error;
};

}  // namespace fixkit
