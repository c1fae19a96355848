#include "streamlogic/trunc_series.hpp"

#include <algorithm>
#include <sstream>

#include "streamlogic/errors.hpp"

namespace streamlogic {

TruncSeries::TruncSeries(long start, std::vector<Rational> coeffs)
    : start_(start), coeffs_(std::move(coeffs)) {}

bool TruncSeries::known_at(long index) const {
    return index >= start_ && index < start_ + order();
}

Rational TruncSeries::at(long index) const {
    if (!known_at(index))
        throw Error(ErrorCode::INSUFFICIENT_ORDER, "coefficient outside trusted window");
    return coeffs_[index - start_];
}

TruncSeries TruncSeries::add(const TruncSeries& o) const {
    if (coeffs_.empty()) return o;
    if (o.coeffs_.empty()) return *this;
    // Trusted window is the intersection of the two windows, extended down to
    // the lower start when the other series is known there.
    long lo = std::min(start_, o.start_);
    long hi = std::min(start_ + order(), o.start_ + o.order());
    if (hi <= lo) throw Error(ErrorCode::INSUFFICIENT_ORDER, "ts add: disjoint windows");
    std::vector<Rational> cs;
    for (long i = lo; i < hi; ++i) {
        Rational a = known_at(i) ? at(i) : Rational(0);
        Rational b = o.known_at(i) ? o.at(i) : Rational(0);
        // Below the later of the two starts, the missing coefficients are 0
        // only if i < that series' start; outside its upper window it is
        // untrusted, which the hi bound already excludes.
        cs.push_back(a + b);
    }
    return TruncSeries(lo, std::move(cs));
}

TruncSeries TruncSeries::mul(const TruncSeries& o) const {
    if (coeffs_.empty() || o.coeffs_.empty())
        throw Error(ErrorCode::INSUFFICIENT_ORDER, "ts mul: empty operand");
    int n = std::min(order(), o.order());
    long start = start_ + o.start_;
    std::vector<Rational> cs(n, Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + i < n; ++j) cs[i + j] += coeffs_[i] * o.coeffs_[j];
    return TruncSeries(start, std::move(cs));
}

TruncSeries TruncSeries::div(const TruncSeries& o) const {
    if (o.coeffs_.empty() || sgn(o.coeffs_[0]) == 0)
        throw Error(ErrorCode::INSUFFICIENT_ORDER,
                    "ts div: divisor head unknown or zero at its start index");
    if (coeffs_.empty()) throw Error(ErrorCode::INSUFFICIENT_ORDER, "ts div: empty dividend");
    int n = std::min(order(), o.order());
    long start = start_ - o.start_;
    std::vector<Rational> q(n, Rational(0));
    for (int i = 0; i < n; ++i) {
        Rational acc = coeffs_[i];
        for (int j = 0; j < i; ++j) acc -= q[j] * o.coeffs_[i - j];
        q[i] = acc / o.coeffs_[0];
    }
    return TruncSeries(start, std::move(q));
}

std::string TruncSeries::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ", ";
        os << coeffs_[i].get_str();
    }
    os << ", ...) @ start=" << start_;
    return os.str();
}

TruncSeries sqrt_prefix(const TruncSeries& f, int n) {
    if (n < 1) throw Error(ErrorCode::INTERNAL, "sqrt_prefix: n must be positive");
    if (f.start() != 0)
        throw Error(ErrorCode::NO_REAL_ROOT, "sqrt_prefix: series must start at index 0");
    if (f.order() < n)
        throw Error(ErrorCode::INSUFFICIENT_ORDER, "sqrt_prefix: fewer trusted coefficients than requested");
    Rational f0 = f.at(0);
    if (sgn(f0) <= 0) throw Error(ErrorCode::NO_REAL_ROOT, "sqrt_prefix: head not positive");
    auto g0 = exact_sqrt(f0);
    if (!g0) throw Error(ErrorCode::IRRATIONAL_HEAD, "sqrt_prefix: head is not a rational square");
    // Equate coefficients in g*g = f:
    //   f_n = sum_{i=0..n} g_i g_{n-i}  =>  g_n = (f_n - sum_{0<i<n}) / (2 g_0)
    std::vector<Rational> g(n, Rational(0));
    g[0] = *g0;
    for (int k = 1; k < n; ++k) {
        Rational acc = f.at(k);
        for (int i = 1; i < k; ++i) acc -= g[i] * g[k - i];
        g[k] = acc / (Rational(2) * g[0]);
    }
    return TruncSeries(0, std::move(g));
}

TruncSeries catalan_check(int n) {
    if (n < 1) throw Error(ErrorCode::INTERNAL, "catalan_check: n must be positive");
    // 2 / (1 + sqrt(1 - 4X)), computed on prefixes of length n.
    std::vector<Rational> radicand(n, Rational(0));
    radicand[0] = 1;
    if (n > 1) radicand[1] = -4;
    TruncSeries root = sqrt_prefix(TruncSeries(0, std::move(radicand)), n);
    std::vector<Rational> one(n, Rational(0)), two(n, Rational(0));
    one[0] = 1;
    two[0] = 2;
    TruncSeries den = root.add(TruncSeries(0, std::move(one)));
    return TruncSeries(0, std::move(two)).div(den);
}

} // namespace streamlogic
