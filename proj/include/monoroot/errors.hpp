#pragma once

#include <stdexcept>
#include <string>

namespace monoroot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid geometry or index (out-of-range grid index, malformed box, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Refusal to run an exhaustive routine above its size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A user evaluator produced an unusable value (NaN, wrong arity, ...).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (instance files, CLI arguments, group sizes).
class InputError : public Error {
 public:
  using Error::Error;
};

enum class Hypothesis {
  positive_switching,
  sum_switching,
  delta_continuity,
  monotonicity,
};

const char* to_string(Hypothesis h);

/// A solver observed evidence that one of its preconditions does not hold.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(Hypothesis which, const std::string& detail)
      : Error(std::string(to_string(which)) + " violated: " + detail), which_(which) {}

  Hypothesis which() const noexcept { return which_; }

 private:
  Hypothesis which_;
};

/// A claim that a reduction guarantees was falsified at runtime.
class ReductionViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace monoroot
