#ifndef STREAMLOGIC_UNIPOLY_HPP
#define STREAMLOGIC_UNIPOLY_HPP

#include <string>
#include <utility>
#include <vector>

#include "streamlogic/rational.hpp"

namespace streamlogic {

// Dense univariate polynomial over the rationals, indexed by degree.
// Invariant: highest-degree coefficient nonzero unless the polynomial is zero.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(Rational c);
    explicit UniPoly(std::vector<Rational> coeffs);

    static UniPoly monomial(const Rational& c, int degree);
    static UniPoly x();

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    // Lowest index with nonzero coefficient; -1 for the zero polynomial.
    int low_degree() const;
    const Rational& coeff(int i) const;
    const Rational& lead() const { return coeffs_.back(); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly operator-() const;
    bool operator==(const UniPoly& o) const { return coeffs_ == o.coeffs_; }

    UniPoly scaled(const Rational& c) const;
    // Multiply by X^k (k >= 0).
    UniPoly shifted(int k) const;

    UniPoly derivative() const;
    Rational eval(const Rational& x) const;

    // Exact field division: (quotient, remainder) with p = q*quot + rem.
    static std::pair<UniPoly, UniPoly> divmod(const UniPoly& p, const UniPoly& q);
    static UniPoly gcd(UniPoly a, UniPoly b); // monic
    UniPoly square_free_part() const;

    std::string to_string(const std::string& var = "X") const;

  private:
    void trim();
    std::vector<Rational> coeffs_;
};

// Number of distinct real roots of p in the open interval (a, b).
// Throws ENDPOINT_ROOT if p vanishes at a or b.
int sturm_count(const UniPoly& p, const Rational& a, const Rational& b);

// Distinct real roots of p in (a, b), fully isolated: disjoint open rational
// intervals (lo, hi), each containing exactly one root, sorted.
std::vector<std::pair<Rational, Rational>> isolate_roots(const UniPoly& p);

// Upper bound B such that all real roots of p lie in (-B, B).
Rational root_bound(const UniPoly& p);

} // namespace streamlogic

#endif
