#pragma once

#include <stdexcept>
#include <string>

namespace gravbell {

/// A configuration that violates its documented schema or invariants.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A requested closed-form inversion has no solution (e.g. tuning a
/// branch geometry whose entangling phase rate is identically zero).
struct NoSolutionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A statistical estimate was requested from data that cannot support it.
struct InsufficientDataError : std::runtime_error {
  InsufficientDataError(std::string which_pair, const std::string& msg)
      : std::runtime_error(msg), pair_label(std::move(which_pair)) {}
  std::string pair_label;
};

/// An internal invariant failed; indicates a bug, not bad input.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace gravbell
