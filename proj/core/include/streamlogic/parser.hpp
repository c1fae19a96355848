#ifndef STREAMLOGIC_PARSER_HPP
#define STREAMLOGIC_PARSER_HPP

#include <string>

#include "streamlogic/formula.hpp"

namespace streamlogic {

// Parse one formula (UTF-8, '#' comments). The result is alpha-renamed and
// uses only the core relations (=, <=, <, divides).
FormulaPtr parse_formula(const std::string& text);

// Closed-form stream expression: rationals, X, + - * / ^, parentheses.
LaurentRational parse_stream_expr(const std::string& text);

} // namespace streamlogic

#endif
