#pragma once

#include <stdexcept>
#include <string>

namespace credibility {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or malformed input data (a precondition failed).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A credibility search could not complete.
class SearchError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to produce a trustworthy value.
class NumericError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace detail
}  // namespace credibility
