#pragma once

#include <stdexcept>
#include <string>

namespace vqc {

/// Invalid study, population, or evaluation settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data that violates a schema or referential constraint.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vqc
