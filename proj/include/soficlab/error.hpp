#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace soficlab {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad word syntax, unknown generator, non-prime modulus, ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A search or enumeration exceeded its configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionCap : public Error {
 public:
  using Error::Error;
};

class RelatorViolated : public Error {
 public:
  RelatorViolated(std::size_t level, std::string relator)
      : Error("relator " + relator + " does not act trivially at level " +
              std::to_string(level)),
        level_(level),
        relator_(std::move(relator)) {}

  std::size_t level() const noexcept { return level_; }
  const std::string& relator() const noexcept { return relator_; }

 private:
  std::size_t level_;
  std::string relator_;
};

class NotHomomorphism : public Error {
 public:
  using Error::Error;
};

class UnknownGroup : public Error {
 public:
  using Error::Error;
};

// An exact identity that must hold failed to hold. Always a hard failure.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class OracleMismatch : public InvariantViolation {
 public:
  OracleMismatch(std::uint64_t linear_count, std::uint64_t brute_count)
      : InvariantViolation("oracle mismatch: p^kernel_dim = " +
                           std::to_string(linear_count) +
                           ", brute-force count = " +
                           std::to_string(brute_count)),
        linear_count_(linear_count),
        brute_count_(brute_count) {}

  std::uint64_t linear_count() const noexcept { return linear_count_; }
  std::uint64_t brute_count() const noexcept { return brute_count_; }

 private:
  std::uint64_t linear_count_;
  std::uint64_t brute_count_;
};

}  // namespace soficlab
