#pragma once

#include <stdexcept>

namespace idr {

// Malformed text input: order specifications, CSV cells, model JSON.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File system failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected but well-formed input is reported with std::invalid_argument.

}  // namespace idr
