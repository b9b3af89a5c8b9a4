#pragma once

#include <stdexcept>
#include <string>

namespace hlc {

/// Malformed instance, parameter or file. Maps to CLI exit code 3.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration or construction would exceed its size cap. CLI exit code 4.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hlc
