#ifndef STREAMLOGIC_LAURENT_HPP
#define STREAMLOGIC_LAURENT_HPP

#include <compare>
#include <string>

#include "streamlogic/rational.hpp"
#include "streamlogic/trunc_series.hpp"
#include "streamlogic/unipoly.hpp"

namespace streamlogic {

// v(f) for a Laurent rational: FINITE(k) or +infinity for the zero stream.
struct Valuation {
    bool finite = false;
    long value = 0;

    static Valuation infinity() { return {false, 0}; }
    static Valuation of(long k) { return {true, k}; }
    bool operator==(const Valuation&) const = default;
};

enum class Ordering { LT, EQ, GT };

// Quotient num/den of univariate polynomials over the rationals, in canonical
// form: gcd(num, den) = 1 and the lowest nonzero coefficient of den is 1.
// Denotes an element of the field of formal Laurent series.
class LaurentRational {
  public:
    LaurentRational() = default; // zero
    explicit LaurentRational(Rational c);
    LaurentRational(UniPoly num, UniPoly den);

    static LaurentRational x();
    static LaurentRational constant(const Rational& c) { return LaurentRational(c); }

    const UniPoly& num() const { return num_; }
    const UniPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    LaurentRational operator+(const LaurentRational& o) const;
    LaurentRational operator-(const LaurentRational& o) const;
    LaurentRational operator*(const LaurentRational& o) const;
    LaurentRational operator/(const LaurentRational& o) const; // DIV_BY_ZERO
    LaurentRational operator-() const;
    bool operator==(const LaurentRational& o) const { return num_ == o.num_ && den_ == o.den_; }

    Valuation valuation() const;
    // |f| = 2^(-v(f)), with |0| = 0; exact dyadic rational.
    Rational abs_val() const;
    // Coefficient of X^i in the series expansion.
    Rational coeff_at(long i) const;
    // First n coefficients starting at v(f) (at 0 for the zero stream).
    TruncSeries coeffs(int n) const;

    // Sign of the lead coefficient; total order of the positive cone.
    Sign sign() const;

    // hd/tl require a power series (valuation >= 0): NOT_A_POWER_SERIES.
    Rational hd() const;
    LaurentRational tl() const;

    std::string to_string() const;

  private:
    void normalize();
    UniPoly num_;
    UniPoly den_ = UniPoly(Rational(1));
};

Ordering compare(const LaurentRational& f, const LaurentRational& g);
Rational metric_d(const LaurentRational& f, const LaurentRational& g);
LaurentRational cons(const Rational& r, const LaurentRational& f);

} // namespace streamlogic

#endif
