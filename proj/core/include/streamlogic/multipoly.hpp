#ifndef STREAMLOGIC_MULTIPOLY_HPP
#define STREAMLOGIC_MULTIPOLY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "streamlogic/rational.hpp"
#include "streamlogic/unipoly.hpp"

namespace streamlogic {

// Exponent vector, one entry per variable index; trailing zeros trimmed.
using Monomial = std::vector<unsigned>;

// Graded lexicographic order by variable index.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial over the rationals. Canonical: no zero
// coefficients stored, monomials in graded lex order.
class MultiPoly {
  public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    MultiPoly() = default;
    explicit MultiPoly(Rational c);
    static MultiPoly var(int v);
    static MultiPoly term(const Rational& c, Monomial m);
    static MultiPoly from_unipoly(const UniPoly& p, int v);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Rational& constant_value() const; // requires is_constant()
    const TermMap& terms() const { return terms_; }

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
    bool operator<(const MultiPoly& o) const; // arbitrary total order for maps

    MultiPoly scaled(const Rational& c) const;
    MultiPoly pow(unsigned n) const;

    int degree_in(int v) const;
    std::set<int> variables() const;
    bool depends_on(int v) const { return degree_in(v) > 0; }
    // True when every variable of the polynomial is in vs.
    bool vars_subset_of(const std::set<int>& vs) const;

    // Coefficients of v^0 .. v^deg as polynomials in the other variables.
    std::vector<MultiPoly> coeffs_in(int v) const;
    static MultiPoly from_coeffs(const std::vector<MultiPoly>& cs, int v);

    MultiPoly derivative(int v) const;

    // Requires the polynomial to involve at most variable v.
    UniPoly to_unipoly(int v) const;

    Rational eval(const std::map<int, Rational>& assignment) const;

    // Divide by the (positive) rational content; sign pattern preserved.
    MultiPoly primitive_part() const;

    std::string to_string(const std::vector<std::string>& names) const;

  private:
    void add_term(const Monomial& m, const Rational& c);
    TermMap terms_;
};

// Sign of the exact evaluation; throws UNBOUND_VARIABLE on missing variables.
Sign eval_sign(const MultiPoly& p, const std::map<int, Rational>& assignment);

struct PseudoDivision {
    MultiPoly quotient;
    MultiPoly remainder;
    MultiPoly multiplier; // power of q's leading coefficient in var
};

// multiplier * p = quotient * q + remainder, deg_var(remainder) < deg_var(q).
// Throws DEGENERATE_DIVISOR if q is constant in var.
PseudoDivision pseudo_division(const MultiPoly& p, const MultiPoly& q, int var);

} // namespace streamlogic

#endif
