#ifndef STREAMLOGIC_QE_HPP
#define STREAMLOGIC_QE_HPP

#include <string>

#include "streamlogic/expand.hpp"
#include "streamlogic/formula.hpp"
#include "streamlogic/unipoly.hpp"

namespace streamlogic {

struct QeOptions {
    long budget = 2'000'000;   // abstract work units; BUDGET_EXCEEDED past this
    bool presolve = true;      // substitute linearly determined variables first
    bool infinitesimal = false; // decide polynomials in X alone by valuation sign
    bool trace = false;        // progress notes on stderr
};

struct QeStats {
    long splits = 0;       // sign case distinctions
    long remainders = 0;   // pseudo-remainder steps
    long disjuncts = 0;    // conjunctive cells fed to the sign-matrix core
    long presolved = 0;    // quantifiers removed by linear substitution
};

// Sign of a univariate polynomial evaluated at a positive infinitesimal:
// the sign of its lowest-degree nonzero coefficient.
Sign sign_at_infinitesimal(const UniPoly& p);

// Evaluate a quantifier-free formula whose atoms involve no variables other
// than the constant X; truth of order atoms is decided at the infinitesimal.
bool evaluate_qf(const FormulaPtr& f);

// Quantifier elimination over the ordered field by sign-matrix case analysis.
// The result is equivalent, quantifier-free, and mentions only free variables
// of the input (and X). Quantifier sorts are ignored: every bound variable
// ranges over the field.
FormulaPtr eliminate(const FormulaPtr& f, const QeOptions& opts = {}, QeStats* stats = nullptr);

// Remove prefix quantifiers that some equation of the matrix determines
// linearly with an invertible constant coefficient. Input must be prenex.
FormulaPtr linear_presolve(const FormulaPtr& f, const QeOptions& opts = {}, QeStats* stats = nullptr);

struct Decision {
    bool valid = false;
    QeStats stats;
    ExpansionReport expansion;
};

// Full decision pipeline for stream sentences: divides expansion, hd/tl
// elimination, constant clearing, power-series relativization, prenexing,
// linear presolve, elimination, ground evaluation.
Decision decide(const FormulaPtr& f, QeOptions opts = {});

} // namespace streamlogic

#endif
