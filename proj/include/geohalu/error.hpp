#pragma once

#include <stdexcept>
#include <string>

namespace geohalu {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (bad JSON, wrong header, truncated file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value violates a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Not enough facts in the graph to satisfy a request.
class PopulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace geohalu
