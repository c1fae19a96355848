#ifndef STREAMLOGIC_EXPAND_HPP
#define STREAMLOGIC_EXPAND_HPP

#include <map>
#include <string>
#include <vector>

#include "streamlogic/formula.hpp"
#include "streamlogic/transform.hpp"

namespace streamlogic {

// What the definitional hd/tl expansion did: which rules fired, which fresh
// variables it introduced, and any head/tail occurrences it could not clear.
struct ExpansionReport {
    std::vector<std::string> introduced;     // fresh variable names
    std::vector<std::string> rules;          // rule tags, in application order
    std::vector<std::string> residual;       // printed forms of surviving hd/tl terms
    bool complete() const { return residual.empty(); }
};

// Clear stream-constant denominators out of polynomial atoms. An atom
// n1/d1 ~ n2/d2 becomes n1*d2 - n2*d1 ~ 0 for equations and
// (n1*d2 - n2*d1) * d1*d2 ~ 0 for inequalities (the extra square-free factor
// keeps the sign). Atoms containing hd/tl/cons are left untouched.
FormulaPtr expand_constants(const FormulaPtr& f);

// Replace s divides t by exists h : S. t = s * h.
FormulaPtr expand_divides(const FormulaPtr& f);

// Rewrite power-series quantifiers into field quantifiers guarded by the
// definable predicate "x is a power series":
//   exists w. (w*w = 1 + X*x*x /\ X*x*x <= 1).
// Over Laurent series the two conjuncts each say v(x) >= 0 (the square
// characterization by valuation parity, and the convexity bound); the bound
// is kept alongside the square so the guard still excludes poles when the
// downstream elimination interprets quantifiers over a real closure.
FormulaPtr relativize(const FormulaPtr& f);

// Eliminate hd/tl/cons by homomorphic pushes and definitional rewrites that
// pin heads and tails with fresh variables. Occurrences that survive are
// listed in the report; callers that need totality should treat a non-empty
// residual as UNSUPPORTED_FRAGMENT.
std::pair<FormulaPtr, ExpansionReport> eliminate_hd_tl(const FormulaPtr& f);

// Coinduction step for a binary relation given as a formula B with free
// variables x, y:   forall x y. B(x,y) -> hd x = hd y /\ B(tl x, tl y).
FormulaPtr bisim_formula(const FormulaPtr& body, const std::string& x, const std::string& y);

// Evaluate a quantifier-free sentence under an assignment of streams to
// variables. Throws NOT_GROUND on quantifiers, UNBOUND_VARIABLE on misses.
bool evaluate_ground(const FormulaPtr& f, const std::map<std::string, LaurentRational>& env);
LaurentRational evaluate_term(const TermPtr& t, const std::map<std::string, LaurentRational>& env);

} // namespace streamlogic

#endif
