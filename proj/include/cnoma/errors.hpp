#pragma once

#include <stdexcept>
#include <string>

namespace cnoma {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map the whole family to one exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. negative SINR).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Construction-time invariant violated (bad channel, cache fraction, load...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DegenerateChannelError : public Error {
 public:
  using Error::Error;
};

// Delivery math is only implemented for cache Case I.
class UnsupportedCaseError : public Error {
 public:
  using Error::Error;
};

// rate_bounds() called with a power vector outside the region's power set.
class RegionMismatchError : public Error {
 public:
  using Error::Error;
};

// Simplex pivot magnitude fell below the conditioning threshold.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

class NoSolutionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cnoma
