#pragma once

#include <stdexcept>
#include <string>

namespace krein {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unsorted atoms, non-positive masses, bad JSON, bad flags.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of the requested quantity.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NormalizationImpossible : public Error {
 public:
  using Error::Error;
};

/// The principal solution only exists for negative spectral parameter.
class DivergentTail : public Error {
 public:
  using Error::Error;
};

class EmptySpectrum : public Error {
 public:
  using Error::Error;
};

class RootBracketFailure : public Error {
 public:
  using Error::Error;
};

/// A string with infinite right end has no finite spectral measure; an
/// explicit Dirichlet boundary must be supplied.
class TruncationRequired : public Error {
 public:
  using Error::Error;
};

/// Loss of positivity while expanding a spectrum into string parameters.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// Numeric supremum did not settle; the scale function likely violates the
/// ratio conditions.
class NonFiniteSup : public Error {
 public:
  using Error::Error;
};

/// The limit of a spectrum sequence is trivial while the strings do not
/// shrink, so no limit string exists.
class DegenerateLimit : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// A hypothesis of a verifier is not met (for example a growth condition).
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace krein
