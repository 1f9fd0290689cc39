#ifndef DUCTFLOW_ERRORS_HPP
#define DUCTFLOW_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace ductflow {

/// A state or parameter left the model's domain of validity.
/// Carries the name and value of the offending quantity.
class DomainError : public std::runtime_error {
public:
  DomainError(const std::string& quantity, double value)
      : std::runtime_error(format(quantity, value)),
        quantity_(quantity),
        value_(value) {}

  const std::string& quantity() const { return quantity_; }
  double value() const { return value_; }

private:
  static std::string format(const std::string& quantity, double value) {
    std::ostringstream os;
    os << "domain error: " << quantity << " = " << value;
    return os.str();
  }

  std::string quantity_;
  double value_;
};

class NoConvergence : public std::runtime_error {
public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what + " (residual " + std::to_string(residual) +
                           " after " + std::to_string(iterations) +
                           " iterations)"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

private:
  double residual_;
  int iterations_;
};

class VacuumError : public std::runtime_error {
public:
  explicit VacuumError(const std::string& what) : std::runtime_error(what) {}
};

/// A characteristic speed approached zero inside the stationary integrator.
class SonicError : public std::runtime_error {
public:
  explicit SonicError(const std::string& what) : std::runtime_error(what) {}
};

class IntegrationError : public std::runtime_error {
public:
  explicit IntegrationError(const std::string& what)
      : std::runtime_error(what) {}
};

class NonSubsonicResult : public std::runtime_error {
public:
  explicit NonSubsonicResult(const std::string& what)
      : std::runtime_error(what) {}
};

class NonSubsonicTrace : public std::runtime_error {
public:
  explicit NonSubsonicTrace(const std::string& what)
      : std::runtime_error(what) {}
};

class SpeedSignError : public std::runtime_error {
public:
  explicit SpeedSignError(const std::string& what)
      : std::runtime_error(what) {}
};

class NotApplicable : public std::runtime_error {
public:
  explicit NotApplicable(const std::string& what) : std::runtime_error(what) {}
};

class AmplitudeOverflow : public std::runtime_error {
public:
  explicit AmplitudeOverflow(const std::string& what)
      : std::runtime_error(what) {}
};

/// Closed-form expansion coefficients are derived for gamma = 5/3 only.
class UnsupportedGamma : public std::runtime_error {
public:
  explicit UnsupportedGamma(double gamma)
      : std::runtime_error("closed forms require gamma = 5/3, got " +
                           std::to_string(gamma)) {}
};

}  // namespace ductflow

#endif
