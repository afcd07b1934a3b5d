#pragma once

#include <stdexcept>
#include <string>

namespace umean {

// Bad inputs: unknown names, parameters out of range, data outside the
// transform domain. CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Algorithms that failed to converge or overflowed. CLI maps this to exit
// code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace umean
