#pragma once

#include <stdexcept>
#include <string>

namespace cbd {

// Base of everything the library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad ids, pmfs that do not normalize, etc.
class validation_error : public error {
 public:
  using error::error;
};

// An explicit size guard was hit (column count, realization count, ...).
class resource_error : public error {
 public:
  using error::error;
};

// Input is valid but outside an operation's domain, e.g. the direct fraction
// of an inconsistently connected system.
class precondition_error : public error {
 public:
  using error::error;
};

// A constraint family admits no deterministic realization.
class empty_family_error : public error {
 public:
  using error::error;
};

// A self-check failed. Seeing one of these means a bug in this library.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace cbd
