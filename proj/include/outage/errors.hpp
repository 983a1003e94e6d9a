#ifndef OUTAGE_ERRORS_HPP
#define OUTAGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace outage {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// CGF evaluated outside its convergence strip.
class StripError : public Error {
  public:
    explicit StripError(const std::string& msg) : Error(msg) {}
};

// Saddle point abscissa outside the attainable range of K'.
class RangeError : public Error {
  public:
    RangeError(const std::string& msg, double attainable_lo, double attainable_hi)
        : Error(msg), attainable_lo(attainable_lo), attainable_hi(attainable_hi) {}
    double attainable_lo;
    double attainable_hi;
};

// Iteration cap reached without meeting the tolerance.
class ConvergenceError : public Error {
  public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Quadrature or inversion failed; carries the best estimate reached.
class NumericalError : public Error {
  public:
    NumericalError(const std::string& msg, double partial_value, double err_est)
        : Error(msg), partial_value(partial_value), err_est(err_est) {}
    double partial_value;
    double err_est;
};

// A sufficient condition of the asymmetric-NIG base failed; the caller
// is expected to fall back to the next base in the chain.
class ConditionViolated : public Error {
  public:
    explicit ConditionViolated(const std::string& which) : Error("condition violated: " + which), which(which) {}
    std::string which;
};

// |c| too small for the symmetric-NIG construction (saddle at the mean).
class DegenerateC : public Error {
  public:
    explicit DegenerateC(const std::string& msg) : Error(msg) {}
};

// A non-finite intermediate appeared inside a base evaluation.
class NonFiniteError : public Error {
  public:
    explicit NonFiniteError(const std::string& msg) : Error(msg) {}
};

// Bad scenario/CLI configuration; message names the offending field.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace outage

#endif  // OUTAGE_ERRORS_HPP
