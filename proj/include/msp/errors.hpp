#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace msp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, configuration or file contents (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Base for numerical failures (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, double eigenvalue)
      : NumericalError(what), eigenvalue_(eigenvalue) {}
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// A point sits on (or too close to) the cut locus of an anchor.
class SingularConfiguration : public NumericalError {
 public:
  SingularConfiguration(const std::string& what, std::size_t anchor)
      : NumericalError(what), anchor_(anchor) {}
  std::size_t anchor_index() const noexcept { return anchor_; }

 private:
  std::size_t anchor_;
};

class IllConditioned : public NumericalError {
 public:
  IllConditioned(const std::string& what, double jitter)
      : NumericalError(what), jitter_(jitter) {}
  double final_jitter() const noexcept { return jitter_; }

 private:
  double jitter_;
};

class DegenerateStep : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace msp
