#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fifspec {

// Base of every error thrown by the library. The CLI maps subclasses onto
// exit codes (format 2, domain 3, resource 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// |d_n| >= 1 somewhere.
class ContractivityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Operation needs a canonical model (x in [0,1], zero endpoints, even spacing).
class UnsupportedFormError : public DomainError {
 public:
  using DomainError::DomainError;
};

class SingularSystemError : public DomainError {
 public:
  SingularSystemError(const std::string& what, std::size_t numerical_rank)
      : DomainError(what), rank_(numerical_rank) {}
  std::size_t numerical_rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class UnderdeterminedError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Every spectral bin was masked out.
class DegenerateSignalError : public DomainError {
 public:
  using DomainError::DomainError;
};

// No candidate order is compatible with the signal length.
class UndetectableOrderError : public DomainError {
 public:
  using DomainError::DomainError;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace fifspec
