#pragma once

#include <stdexcept>
#include <string>

namespace cartogrammer {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (GeoJSON, CSV) or geometry that violates the
// MapDocument invariants.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Dataset ids that do not line up with the map.
class BindError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (unknown id, negative size, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Two maps that should share ring topology do not.
class StructureMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace cartogrammer
