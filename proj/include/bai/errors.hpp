#pragma once

#include <stdexcept>
#include <string>

namespace bai {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map the whole family onto one exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooFewArms : public Error {
 public:
  using Error::Error;
};

class NonUniqueMaximum : public Error {
 public:
  using Error::Error;
};

class InvalidVariance : public Error {
 public:
  using Error::Error;
};

class InvalidDelta : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NonPositiveGap : public Error {
 public:
  using Error::Error;
};

class NonPositiveWeight : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class TruthMismatch : public Error {
 public:
  using Error::Error;
};

class InstanceLoadError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace bai
