#pragma once

#include <stdexcept>
#include <string>

namespace spde {

struct ResonantEigenvalue : std::runtime_error {
  explicit ResonantEigenvalue(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateSamples : std::runtime_error {
  explicit DegenerateSamples(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularQt : std::runtime_error {
  explicit SingularQt(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonFiniteState : std::runtime_error {
  explicit NonFiniteState(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoContraction : std::runtime_error {
  explicit NoContraction(const std::string& msg) : std::runtime_error(msg) {}
};

struct PathLeftBox : std::runtime_error {
  explicit PathLeftBox(const std::string& msg) : std::runtime_error(msg) {}
};

struct IllConditionedK : std::runtime_error {
  explicit IllConditionedK(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnsupportedFamily : std::runtime_error {
  explicit UnsupportedFamily(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spde
