#pragma once

#include <stdexcept>
#include <string>

namespace fxt {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AllZeroMatrix : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonFiniteOutput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveSigma : std::domain_error {
  using std::domain_error::domain_error;
};

struct BadVariantParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PitchSingularity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidK : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fxt
