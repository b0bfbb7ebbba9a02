#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xda {

// Process exit codes used by the command-line front end.
enum class ExitCode : int {
  kOk = 0,
  kInvalidConfig = 2,
  kBudgetExhausted = 3,
  kInvariantViolation = 4,
};

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

/// Bad input: malformed point spec, precondition violated, wrong field, etc.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(what, ExitCode::kInvalidConfig) {}
};

/// A refinable quantity could not be decided within the precision cap.
/// `index` is the position of the first undecided item (partial quotient,
/// coordinate, ...); raising the cap is the remedy.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, std::size_t index)
      : Error(what, ExitCode::kBudgetExhausted), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// No good pair was found below the height cap.
class HeightCapExceeded : public Error {
 public:
  explicit HeightCapExceeded(const std::string& what)
      : Error(what, ExitCode::kBudgetExhausted) {}
};

/// The target is certified rational, so no infinite family of approximants
/// of the requested kind exists.
class RationalPoint : public InvalidInput {
 public:
  explicit RationalPoint(const std::string& what) : InvalidInput(what) {}
};

/// Coordinates lie outside the number field of an iterated function system.
class FieldMismatch : public InvalidInput {
 public:
  explicit FieldMismatch(const std::string& what) : InvalidInput(what) {}
};

/// A proven inequality failed: always a bug in this library.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what)
      : Error(what, ExitCode::kInvariantViolation) {}
};

}  // namespace xda
