#pragma once

#include <stdexcept>
#include <string>

namespace semirv {

// Bad or non-finite parameters in a function/distribution spec.
class InvalidSpecError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Calling an operation on the wrong kind of object (e.g. pmf of a
// continuous distribution).
class UsageError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// A numerical routine could not reach the requested tolerance.  Carries the
// error estimate it did achieve.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error_(achieved) {}
    double achieved_error() const { return achieved_error_; }

  private:
    double achieved_error_;
};

// Construction failed a validity check (e.g. non-monotone tail); names the
// violating point.
class InvalidConstructionError : public std::runtime_error {
  public:
    InvalidConstructionError(const std::string& what, double at)
        : std::runtime_error(what), violating_x_(at) {}
    double violating_x() const { return violating_x_; }

  private:
    double violating_x_;
};

// Closed-form predictor asked for with inputs that belong to a different
// case of the dispatch.
class WrongCaseError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// Inputs outside the supported theory (mixed decay rates, convergent-integral
// tail functions, ...).
class UnsupportedCaseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Derivative requested at a kink; both one-sided slopes are attached.
class OneSidedDerivativeError : public std::runtime_error {
  public:
    OneSidedDerivativeError(const std::string& what, double left, double right)
        : std::runtime_error(what), left_(left), right_(right) {}
    double left_derivative() const { return left_; }
    double right_derivative() const { return right_; }

  private:
    double left_;
    double right_;
};

}  // namespace semirv
