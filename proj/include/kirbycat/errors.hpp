#pragma once

#include <stdexcept>
#include <string>

namespace kirbycat {

// Root of every domain error raised by the library. The CLI maps these to
// exit code 1; ParseError (script.hpp) maps to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Boundary words of two morphisms do not match.
class CompositionError : public Error {
 public:
  using Error::Error;
};

// Attempt to close a braid whose domain and codomain differ.
class ClosureError : public Error {
 public:
  using Error::Error;
};

class DoubleSpecialization : public Error {
 public:
  using Error::Error;
};

// blow_down on a component that is not an isolated +-1 framed unknot.
class NotBlowdownable : public Error {
 public:
  using Error::Error;
};

class MalformedDiagram : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kirbycat
