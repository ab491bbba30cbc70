#pragma once

#include <stdexcept>
#include <string>

namespace wavebound {

// Precondition violated by an argument (bad level, out-of-range exponent, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An admissibility condition on the wavelet pair or spectral model failed.
class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No truncation plan meets the requested (u, p) target.
class InfeasiblePlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Joint covariance could not be factorised within the jitter cap.
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace wavebound
