#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wolvan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// gcd(a, m) != 1.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

class UnknownSeed : public Error {
 public:
  using Error::Error;
};

/// A separation point does not lie strictly inside the addressed interval.
class PointOutOfRange : public Error {
 public:
  using Error::Error;
};

class MalformedScript : public Error {
 public:
  using Error::Error;
};

/// A derivation step addresses a term that does not exist.
class PathNotFound : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// The left factor of the congruence is divisible by p; use another congruence.
class LeftFactorVanishes : public Error {
 public:
  using Error::Error;
};

class ValidityViolated : public Error {
 public:
  using Error::Error;
};

class ConfigInvalid : public Error {
 public:
  using Error::Error;
};

class ChecksumMismatch : public Error {
 public:
  using Error::Error;
};

class ConfigDrift : public Error {
 public:
  using Error::Error;
};

}  // namespace wolvan
