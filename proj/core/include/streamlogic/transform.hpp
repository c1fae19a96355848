#ifndef STREAMLOGIC_TRANSFORM_HPP
#define STREAMLOGIC_TRANSFORM_HPP

#include <set>
#include <string>

#include "streamlogic/formula.hpp"

namespace streamlogic {

std::set<std::string> free_vars(const FormulaPtr& f);
std::set<std::string> term_vars(const TermPtr& t);
// All variable names occurring anywhere (free or bound).
std::set<std::string> all_vars(const FormulaPtr& f);

TermPtr substitute_term(const TermPtr& t, const std::string& var, const TermPtr& repl);
// Capture-avoiding substitution.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& repl);

// Rename bound variables so every binder introduces a distinct name, also
// distinct from every free variable.
FormulaPtr alpha_rename(const FormulaPtr& f);

// Replace every Iff by the conjunction of both implications.
FormulaPtr desugar_iff(const FormulaPtr& f);

// Prenex normal form; input must be Iff-free. Quantifier sorts preserved.
FormulaPtr prenex(const FormulaPtr& f);

// Fresh variable name not in `used`; `used` is extended with the result.
std::string fresh_name(const std::string& base, std::set<std::string>& used);

} // namespace streamlogic

#endif
