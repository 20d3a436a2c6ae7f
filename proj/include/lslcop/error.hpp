#pragma once

#include <stdexcept>
#include <string>

namespace lslcop {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedKnots : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An argument diagonal failed membership validation.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class SearchFailure : public Error {
 public:
  using Error::Error;
};

class ResolutionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace lslcop
