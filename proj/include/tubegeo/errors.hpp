#pragma once

#include <stdexcept>
#include <string>

namespace tubegeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside the open unit disc.
class DomainError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class NonIntegrableDensity : public Error {
 public:
  using Error::Error;
};

// Bad user input: dimension mismatch, malformed JSON, violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A request outside what the library can decide, e.g. an unsupported face shape.
class Unsupported : public Error {
 public:
  using Error::Error;
};

class LiftOutsideDomain : public Error {
 public:
  using Error::Error;
};

}  // namespace tubegeo
