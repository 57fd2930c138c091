#pragma once

#include <stdexcept>
#include <string>

namespace roughlim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad region/sequence text, invalid constructor
/// arguments, bad CLI values.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A region whose ideal membership or density cannot be certified.
class UndecidableRegion : public Error {
 public:
  explicit UndecidableRegion(const std::string& what)
      : Error("undecidable-region: " + what) {}
};

/// A precondition of an analysis operation does not hold (for instance the
/// sequence is not I-bounded, or has the wrong dimension).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

}  // namespace roughlim
