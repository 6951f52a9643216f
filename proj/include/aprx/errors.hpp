#pragma once

#include <stdexcept>
#include <string>

namespace aprx {

// Base for all toolkit errors; subcommands map these to exit code 2/4.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : Error {
  int line;
  int col;
  ParseError(const std::string& what, int line_, int col_)
      : Error(what + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

struct SemanticError : Error {
  using Error::Error;
};

// faultloc
struct NoFailingTests : Error {
  NoFailingTests() : Error("spectrum has no failing tests") {}
};
struct NothingToLocalize : Error {
  NothingToLocalize() : Error("no counterexamples and no spectrum given") {}
};

// patchgen
struct EmptyPatchSpace : Error {
  EmptyPatchSpace() : Error("no applicable edit exists") {}
};
struct ConflictingEdits : Error {
  using Error::Error;
};

// repair preconditions
struct NotNonTerminating : Error {
  explicit NotNonTerminating(const std::string& verdict)
      : Error("input program is not proven non-terminating (prover says " + verdict + ")") {}
};
struct NoDefectDetected : Error {
  NoDefectDetected() : Error("neither the model checker nor the prover flags the input program") {}
};

// classify
struct NoBugSignal : Error {
  NoBugSignal() : Error("no failing test and no failing formal check") {}
};

// smc exploration caps; carry partial-graph diagnostics
struct StateSpaceExceeded : Error {
  std::size_t statesSeen;
  StateSpaceExceeded(std::size_t cap, std::size_t seen)
      : Error("state cap " + std::to_string(cap) + " exceeded after " +
              std::to_string(seen) + " states"),
        statesSeen(seen) {}
};
struct ValueBoundExceeded : Error {
  std::size_t statesSeen;
  ValueBoundExceeded(long long bound, const std::string& var, std::size_t seen)
      : Error("value bound " + std::to_string(bound) + " exceeded on variable '" + var +
              "' after " + std::to_string(seen) + " states"),
        statesSeen(seen) {}
};

}  // namespace aprx
