#pragma once

#include <stdexcept>
#include <string>

namespace apifrag {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, unknown identifiers, missing resources.
/// The CLI maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace apifrag
