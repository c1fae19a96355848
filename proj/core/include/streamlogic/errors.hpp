#ifndef STREAMLOGIC_ERRORS_HPP
#define STREAMLOGIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace streamlogic {

enum class ErrorCode {
    DEGENERATE_DIVISOR,
    ENDPOINT_ROOT,
    UNBOUND_VARIABLE,
    DIV_BY_ZERO,
    NOT_A_POWER_SERIES,
    INSUFFICIENT_ORDER,
    NO_REAL_ROOT,
    IRRATIONAL_HEAD,
    UNSUPPORTED_FRAGMENT,
    BUDGET_EXCEEDED,
    NOT_GROUND,
    ALGEBRAIC_LOOP,
    NOT_CAUSAL,
    PARSE_ERROR,
    CIRCUIT_ERROR,
    INTERNAL,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

} // namespace streamlogic

#endif
