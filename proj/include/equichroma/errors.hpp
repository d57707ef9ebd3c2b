#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace equichroma {

// Malformed input, or input violating the solver's hypotheses (exit 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition of an operation.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A coloring was expected to be total but is not.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A catalogue move could not be applied to the given state. Finders treat
// this as "not applicable" and continue with the next candidate.
class MoveRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search ran out of its node or step budget (exit 4).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The repair engine reached a state no catalogued move can leave, or a move
// broke a guaranteed post-condition. Carries a replayable dump (exit 3).
class TheoryViolation : public std::runtime_error {
 public:
  TheoryViolation(const std::string& what, std::string dump)
      : std::runtime_error(what), dump_(std::move(dump)) {}

  const std::string& dump() const noexcept { return dump_; }

 private:
  std::string dump_;
};

}  // namespace equichroma
