#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Root of every error raised by the library; callers can catch this alone.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class NotUnitary : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class OffGridError : public Error {
 public:
  using Error::Error;
};

class CommensurabilityError : public Error {
 public:
  using Error::Error;
};

class GuardBandViolation : public Error {
 public:
  using Error::Error;
};

class ImaginaryResidue : public Error {
 public:
  using Error::Error;
};

class DegenerateSigma : public Error {
 public:
  using Error::Error;
};

class WorkOutOfRange : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergokit
