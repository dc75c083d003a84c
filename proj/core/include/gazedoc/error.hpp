#ifndef GAZEDOC_ERROR_HPP_
#define GAZEDOC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gazedoc {

// Bad input data or arguments. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// File system or codec failure. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside an optimizer (non-finite gradient, etc).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gazedoc

#endif  // GAZEDOC_ERROR_HPP_
