#pragma once

#include <stdexcept>
#include <string>

namespace mgc {

// Base of everything the library throws. Derived types let callers (the CLI in
// particular) map failures onto exit statuses without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid inputs: parameters, schedules, configs. All map to exit status 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A condition or threshold was requested outside the parameter case it is
// defined for (most results need case C, K > xi0).
class CaseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class BracketError : public Error {
 public:
  using Error::Error;
};

class StepTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class HistoryGap : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class EmptyWindow : public Error {
 public:
  using Error::Error;
};

class WindowTooShort : public Error {
 public:
  using Error::Error;
};

}  // namespace mgc
