#pragma once

#include <stdexcept>
#include <string>

namespace beurling {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unreadable or ill-formed prime files, bad recipes, bad
/// configuration values. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A computation could not be carried out: violated preconditions, cutoffs
/// beyond the stored data, guards tripped. The CLI maps these to exit code 1.
class ComputeError : public Error {
 public:
  using Error::Error;
};

}  // namespace beurling
