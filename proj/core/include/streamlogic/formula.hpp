#ifndef STREAMLOGIC_FORMULA_HPP
#define STREAMLOGIC_FORMULA_HPP

#include <memory>
#include <set>
#include <string>

#include "streamlogic/laurent.hpp"
#include "streamlogic/rational.hpp"

namespace streamlogic {

// S: power series (the default quantifier sort); L: the Laurent field.
enum class Sort { S, L };

enum class TermKind { Var, RatConst, XConst, StreamConst, Add, Sub, Mul, Neg, Hd, Tl, Cons };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    std::string name;        // Var
    Rational rat;            // RatConst
    LaurentRational stream;  // StreamConst, canonical
    TermPtr a, b;

    static TermPtr var(std::string name);
    static TermPtr rat_const(Rational q);
    static TermPtr x_const();
    static TermPtr stream_const(LaurentRational f);
    static TermPtr add(TermPtr l, TermPtr r);
    static TermPtr sub(TermPtr l, TermPtr r);
    static TermPtr mul(TermPtr l, TermPtr r);
    static TermPtr neg(TermPtr t);
    static TermPtr hd(TermPtr t);
    static TermPtr tl(TermPtr t);
    static TermPtr cons(TermPtr h, TermPtr t);
};

bool term_equal(const TermPtr& a, const TermPtr& b);
std::string term_to_string(const TermPtr& t);

// Core relations; !=, >=, > are desugared at parse time.
enum class Rel { EQ, LE, LT, DIVIDES };

struct Atom {
    TermPtr lhs;
    Rel rel;
    TermPtr rhs;
};

enum class FKind { True, False, Atomic, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    Atom atom;          // Atomic
    FormulaPtr a, b;    // children
    std::string var;    // quantifiers
    Sort sort = Sort::S;

    static FormulaPtr truth(bool b);
    static FormulaPtr atomic(Atom at);
    static FormulaPtr atomic(TermPtr lhs, Rel rel, TermPtr rhs);
    static FormulaPtr negation(FormulaPtr f);
    static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
    static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
    static FormulaPtr implies(FormulaPtr l, FormulaPtr r);
    static FormulaPtr iff(FormulaPtr l, FormulaPtr r);
    static FormulaPtr forall(std::string v, Sort s, FormulaPtr f);
    static FormulaPtr exists(std::string v, Sort s, FormulaPtr f);
};

std::string print(const FormulaPtr& f);

} // namespace streamlogic

#endif
