#pragma once

#include <stdexcept>

namespace minkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree (or exceed a supported bound).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A state, measurement or channel fails one of its defining invariants.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A scalar parameter lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace minkit
