#include "streamlogic/errors.hpp"

namespace streamlogic {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DEGENERATE_DIVISOR: return "DEGENERATE_DIVISOR";
        case ErrorCode::ENDPOINT_ROOT: return "ENDPOINT_ROOT";
        case ErrorCode::UNBOUND_VARIABLE: return "UNBOUND_VARIABLE";
        case ErrorCode::DIV_BY_ZERO: return "DIV_BY_ZERO";
        case ErrorCode::NOT_A_POWER_SERIES: return "NOT_A_POWER_SERIES";
        case ErrorCode::INSUFFICIENT_ORDER: return "INSUFFICIENT_ORDER";
        case ErrorCode::NO_REAL_ROOT: return "NO_REAL_ROOT";
        case ErrorCode::IRRATIONAL_HEAD: return "IRRATIONAL_HEAD";
        case ErrorCode::UNSUPPORTED_FRAGMENT: return "UNSUPPORTED_FRAGMENT";
        case ErrorCode::BUDGET_EXCEEDED: return "BUDGET_EXCEEDED";
        case ErrorCode::NOT_GROUND: return "NOT_GROUND";
        case ErrorCode::ALGEBRAIC_LOOP: return "ALGEBRAIC_LOOP";
        case ErrorCode::NOT_CAUSAL: return "NOT_CAUSAL";
        case ErrorCode::PARSE_ERROR: return "PARSE_ERROR";
        case ErrorCode::CIRCUIT_ERROR: return "CIRCUIT_ERROR";
        case ErrorCode::INTERNAL: return "INTERNAL";
    }
    return "UNKNOWN";
}

} // namespace streamlogic
