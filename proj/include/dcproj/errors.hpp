#pragma once

#include <stdexcept>
#include <string>

namespace dcproj {

/// Malformed or invariant-violating input. The CLI maps this to exit code 1.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dcproj
