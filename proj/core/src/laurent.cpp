#include "streamlogic/laurent.hpp"

#include <sstream>

#include "streamlogic/errors.hpp"

namespace streamlogic {

LaurentRational::LaurentRational(Rational c) : num_(UniPoly(std::move(c))) {}

LaurentRational::LaurentRational(UniPoly num, UniPoly den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorCode::DIV_BY_ZERO, "laurent: zero denominator");
    normalize();
}

LaurentRational LaurentRational::x() { return LaurentRational(UniPoly::x(), UniPoly(Rational(1))); }

void LaurentRational::normalize() {
    if (num_.is_zero()) {
        den_ = UniPoly(Rational(1));
        return;
    }
    UniPoly g = UniPoly::gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = UniPoly::divmod(num_, g).first;
        den_ = UniPoly::divmod(den_, g).first;
    }
    const Rational& low = den_.coeff(den_.low_degree());
    if (!(low == 1)) {
        Rational inv = Rational(1) / low;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

LaurentRational LaurentRational::operator+(const LaurentRational& o) const {
    return LaurentRational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

LaurentRational LaurentRational::operator-(const LaurentRational& o) const {
    return LaurentRational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

LaurentRational LaurentRational::operator*(const LaurentRational& o) const {
    return LaurentRational(num_ * o.num_, den_ * o.den_);
}

LaurentRational LaurentRational::operator/(const LaurentRational& o) const {
    if (o.is_zero()) throw Error(ErrorCode::DIV_BY_ZERO, "division by the zero stream");
    return LaurentRational(num_ * o.den_, den_ * o.num_);
}

LaurentRational LaurentRational::operator-() const {
    LaurentRational r = *this;
    r.num_ = -r.num_;
    return r;
}

Valuation LaurentRational::valuation() const {
    if (is_zero()) return Valuation::infinity();
    return Valuation::of(num_.low_degree() - den_.low_degree());
}

Rational LaurentRational::abs_val() const {
    Valuation v = valuation();
    if (!v.finite) return Rational(0);
    return pow2(-v.value);
}

Sign LaurentRational::sign() const {
    if (is_zero()) return Sign::ZERO;
    // den's lowest coefficient is normalized to 1, so the lead coefficient of
    // the series is num's lowest nonzero coefficient.
    return sign_of(num_.coeff(num_.low_degree()));
}

Rational LaurentRational::coeff_at(long i) const {
    if (is_zero()) return Rational(0);
    long shift = num_.low_degree() - den_.low_degree();
    long k = i - shift; // index into the power-series quotient num1/den1
    if (k < 0) return Rational(0);
    // Strip the pure X powers so both parts have nonzero heads.
    int ln = num_.low_degree(), ld = den_.low_degree();
    // Long division of num1 by den1 up to index k.
    std::vector<Rational> q(k + 1, Rational(0));
    for (long n = 0; n <= k; ++n) {
        Rational acc = num_.coeff(static_cast<int>(n) + ln);
        for (long j = 0; j < n; ++j) acc -= q[j] * den_.coeff(static_cast<int>(n - j) + ld);
        q[n] = acc / den_.coeff(ld);
    }
    return q[k];
}

TruncSeries LaurentRational::coeffs(int n) const {
    if (n < 1) throw Error(ErrorCode::INTERNAL, "coeffs: n must be positive");
    if (is_zero()) return TruncSeries(0, std::vector<Rational>(n, Rational(0)));
    long v = valuation().value;
    std::vector<Rational> cs;
    cs.reserve(n);
    for (int i = 0; i < n; ++i) cs.push_back(coeff_at(v + i));
    return TruncSeries(v, std::move(cs));
}

Rational LaurentRational::hd() const {
    Valuation v = valuation();
    if (v.finite && v.value < 0)
        throw Error(ErrorCode::NOT_A_POWER_SERIES, "hd: negative valuation");
    return coeff_at(0);
}

LaurentRational LaurentRational::tl() const {
    Valuation v = valuation();
    if (v.finite && v.value < 0)
        throw Error(ErrorCode::NOT_A_POWER_SERIES, "tl: negative valuation");
    LaurentRational head{hd()};
    return LaurentRational((num_ - head.num() * den_), den_ * UniPoly::x());
}

std::string LaurentRational::to_string() const {
    if (is_zero()) return "0";
    bool nontrivial_den = den_.degree() > 0 || !(den_.coeff(0) == 1);
    std::ostringstream os;
    bool paren_num = nontrivial_den && num_.degree() > 0;
    if (paren_num) os << "(";
    os << num_.to_string();
    if (paren_num) os << ")";
    if (nontrivial_den) {
        os << "/(" << den_.to_string() << ")";
    }
    return os.str();
}

Ordering compare(const LaurentRational& f, const LaurentRational& g) {
    Sign s = (g - f).sign();
    switch (s) {
        case Sign::POS: return Ordering::LT;
        case Sign::ZERO: return Ordering::EQ;
        default: return Ordering::GT;
    }
}

Rational metric_d(const LaurentRational& f, const LaurentRational& g) {
    return (f - g).abs_val();
}

LaurentRational cons(const Rational& r, const LaurentRational& f) {
    return LaurentRational(Rational(r)) + LaurentRational::x() * f;
}

} // namespace streamlogic
