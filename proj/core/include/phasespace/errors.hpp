#pragma once

#include <stdexcept>
#include <string>

namespace phasespace {

/// A physical or structural precondition was violated by the caller.
/// Carries the module and parameter name so front ends can report them.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string module, std::string parameter, const std::string& message)
      : std::invalid_argument(module + ": " + parameter + ": " + message),
        module_(std::move(module)),
        parameter_(std::move(parameter)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string module_;
  std::string parameter_;
};

/// A numerical monitor tripped during a computation.
class NumericalError : public std::runtime_error {
 public:
  enum class Monitor {
    norm_drift,
    bandwidth,
    boundary,
    realness,
    stiffness,
    convergence,
    residue,
  };

  NumericalError(Monitor monitor, const std::string& message)
      : std::runtime_error(message), monitor_(monitor) {}

  Monitor monitor() const noexcept { return monitor_; }

 private:
  Monitor monitor_;
};

}  // namespace phasespace
