#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fbmlab {

// Base of every library error. what() reads "<module>: <message>".
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Violated precondition (bad sizes, empty batches, out-of-domain parameters).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// sampler

class EmbeddingNotPSD : public Error {
 public:
  explicit EmbeddingNotPSD(const std::string& message) : Error("sampler", message) {}
};

class FactorizationFailed : public Error {
 public:
  explicit FactorizationFailed(const std::string& message) : Error("sampler", message) {}
};

// boundaries

class InvalidBoundary : public Error {
 public:
  explicit InvalidBoundary(const std::string& message) : Error("boundaries", message) {}
};

// estimators

class NonpositiveEstimate : public Error {
 public:
  explicit NonpositiveEstimate(const std::string& message) : Error("estimators", message) {}
};

// persistence / current / functionals

class BoundaryViolatedAtZero : public Error {
 public:
  explicit BoundaryViolatedAtZero(const std::string& message)
      : Error("persistence", message) {}
};

class HorizonMisaligned : public Error {
 public:
  HorizonMisaligned(std::string module, const std::string& message)
      : Error(std::move(module), message) {}
};

class EpsilonBelowResolution : public Error {
 public:
  explicit EpsilonBelowResolution(const std::string& message)
      : Error("functionals", message) {}
};

// cli

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& reason);

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace fbmlab
