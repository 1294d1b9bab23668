#pragma once

#include <stdexcept>
#include <string>

namespace snf {

/// Input exceeds a hard size limit (n too large, matrix too big to be exact).
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// An analysis step could not produce a result on this input.
class PipelineError : public std::runtime_error {
 public:
  explicit PipelineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace snf
