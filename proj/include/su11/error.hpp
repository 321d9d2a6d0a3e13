#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on the numerical inputs was violated (zero variance,
/// empty bracket, unbalanced parameters passed to a balanced-only formula).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Fock-space truncation lost more probability than the configured budget,
/// or the requested cutoff cannot represent the input state.
class TruncationError : public Error {
  public:
    using Error::Error;
};

/// Bad command-line or configuration input (maps to exit code 2).
class UsageError : public Error {
  public:
    using Error::Error;
};

} // namespace su11
