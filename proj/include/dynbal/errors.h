#ifndef DYNBAL_ERRORS_H_
#define DYNBAL_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynbal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DYNBAL_DEFINE_ERROR(Name)              \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what_arg) \
        : Error(#Name ": " + what_arg) {}      \
  }

DYNBAL_DEFINE_ERROR(DimensionMismatch);
DYNBAL_DEFINE_ERROR(NumericalFailure);
DYNBAL_DEFINE_ERROR(IndexOutOfPhase);
DYNBAL_DEFINE_ERROR(UnknownId);
DYNBAL_DEFINE_ERROR(DuplicateId);
DYNBAL_DEFINE_ERROR(InvalidArgument);
DYNBAL_DEFINE_ERROR(SelfLoop);
DYNBAL_DEFINE_ERROR(UnknownEdge);
DYNBAL_DEFINE_ERROR(TooLarge);
DYNBAL_DEFINE_ERROR(ConvergenceFailure);
DYNBAL_DEFINE_ERROR(DecompositionOverflow);
DYNBAL_DEFINE_ERROR(BudgetExceeded);
DYNBAL_DEFINE_ERROR(NotMultipleOf8);
DYNBAL_DEFINE_ERROR(BadParity);
DYNBAL_DEFINE_ERROR(InfeasibleDegree);
DYNBAL_DEFINE_ERROR(ParseError);
DYNBAL_DEFINE_ERROR(InvariantViolation);
DYNBAL_DEFINE_ERROR(ConfigError);
DYNBAL_DEFINE_ERROR(IoError);

#undef DYNBAL_DEFINE_ERROR

// Failure while replaying event `event` (0-based); exit_code follows the CLI
// convention.
class ReplayError : public Error {
 public:
  ReplayError(int64_t event, int exit_code, const std::string& what_arg)
      : Error("event " + std::to_string(event) + ": " + what_arg),
        event_(event),
        exit_code_(exit_code) {}
  int64_t event() const { return event_; }
  int exit_code() const { return exit_code_; }

 private:
  int64_t event_;
  int exit_code_;
};

}  // namespace dynbal

#endif  // DYNBAL_ERRORS_H_
