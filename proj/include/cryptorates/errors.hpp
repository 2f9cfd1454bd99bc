#pragma once

#include <stdexcept>
#include <string>

namespace cryptorates {

/// Thrown when a kernel is evaluated on (or numerically too close to) its
/// singular set: the center point for real Bessel kernels, the ring for the
/// complexified kernel.
class SingularStateError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Thrown when an operation is asked for a model it is not defined for
/// (e.g. the SDE coefficients of the complexified kernel).
class UnsupportedModelError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Thrown when adaptive quadrature or a series evaluation fails to reach the
/// requested tolerance. Carries the best estimate obtained so far.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double best_value, double err_est)
        : std::runtime_error(what), best_value_(best_value), err_est_(err_est) {}

    double best_value() const { return best_value_; }
    double err_est() const { return err_est_; }

  private:
    double best_value_;
    double err_est_;
};

/// Thrown when market inputs admit no arbitrage-free curve. Carries the first
/// offending maturity so callers can report it.
class CalibrationError : public std::runtime_error {
  public:
    CalibrationError(const std::string& what, double maturity)
        : std::runtime_error(what), maturity_(maturity) {}

    double maturity() const { return maturity_; }

  private:
    double maturity_;
};

}  // namespace cryptorates
