#pragma once

#include <stdexcept>
#include <string>

namespace wwgm {

/// Input rejected by a module guard (bad dimensions, out-of-margin labels,
/// unstable step sizes, malformed configs).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation ran but could not certify its own accuracy
/// (series divergence, norm drift, leaked support).
class AccuracyError : public std::runtime_error {
 public:
  explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wwgm
