#pragma once

#include <stdexcept>
#include <string>

namespace iwasawa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value handed to a strong-type constructor violates the type's invariants.
class InvalidElement : public Error {
 public:
  using Error::Error;
};

/// Tr(nm) came out with a non-negligible imaginary part; the inputs were not skew-Hermitian.
class ImaginaryResidue : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// -i*m is not positive definite, so m has no triangular factor s with i*s^H*s = m.
class NotInPrincipalOrbit : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NonFiniteSample : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace iwasawa
