#pragma once

#include <stdexcept>
#include <string>

namespace bellbound {

// Every failure the library can diagnose is thrown as an Error with a
// stable code. The CLI maps codes to exit status; tests match on them.
enum class ErrorCode {
    ScenarioMismatch,
    InvalidScenario,
    InvalidDistribution,
    InvalidFunctional,
    InvalidArgument,
    BudgetExceeded,
    SignalingInput,
    ConstantFunctional,
    AbortCoefficients,
    GuaranteeViolated,   // a re-verified construction failed its own theorem
    RectangleCondition,
    LabelInUse,
    EmbeddingMismatch,
    ParseError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

// Internal consistency check that should be impossible to trip; kept as a
// throw (not assert) so release builds stay honest.
#define BELLBOUND_CHECK(cond, code, msg)                      \
    do {                                                      \
        if (!(cond)) throw ::bellbound::Error((code), (msg)); \
    } while (0)

}  // namespace bellbound
