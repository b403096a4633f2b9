#pragma once

#include <stdexcept>
#include <string>

namespace doseplane {

/// Argument outside the mathematical domain of an operation (quantile at 0, dose outside window).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Parameter set violating model invariants (ordering, positivity).
class InvariantError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Operation invoked in a trial phase that does not allow it.
class StateError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Malformed external input. `field()` carries a dotted path to the offending field when known.
class InputError : public std::invalid_argument {
  public:
    InputError(const std::string& field, const std::string& message)
        : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

/// The sampler could not find a starting point with finite log-posterior.
class InitializationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace doseplane
