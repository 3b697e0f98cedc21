#pragma once

#include <stdexcept>
#include <string>

namespace sysid {

// Thrown when an iterative routine fails to converge or produces
// non-finite values.  Input validation uses std::invalid_argument.
class numeric_failure : public std::runtime_error {
 public:
  explicit numeric_failure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sysid
