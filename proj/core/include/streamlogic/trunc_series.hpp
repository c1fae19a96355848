#ifndef STREAMLOGIC_TRUNC_SERIES_HPP
#define STREAMLOGIC_TRUNC_SERIES_HPP

#include <string>
#include <vector>

#include "streamlogic/rational.hpp"

namespace streamlogic {

// Finite coefficient prefix of a Laurent series: coefficients of
// X^start .. X^(start+order-1); the series is known modulo X^(start+order).
class TruncSeries {
  public:
    TruncSeries() = default;
    TruncSeries(long start, std::vector<Rational> coeffs);

    long start() const { return start_; }
    int order() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational at(long index) const; // 0 outside the trusted window is an error
    bool known_at(long index) const;

    TruncSeries add(const TruncSeries& o) const;
    TruncSeries mul(const TruncSeries& o) const;
    // Requires o's coefficient at its start index nonzero: INSUFFICIENT_ORDER.
    TruncSeries div(const TruncSeries& o) const;

    bool operator==(const TruncSeries& o) const = default;

    // Printed format: (c0, c1, ..., ck, ...) @ start=s
    std::string to_string() const;

  private:
    long start_ = 0;
    std::vector<Rational> coeffs_;
};

// Prefix of the power-series square root with positive head; the head must be
// the square of a rational. Errors: NO_REAL_ROOT, IRRATIONAL_HEAD,
// INSUFFICIENT_ORDER.
TruncSeries sqrt_prefix(const TruncSeries& f, int n);

// First n Catalan numbers via 2/(1 + sqrt(1 - 4X)).
TruncSeries catalan_check(int n);

} // namespace streamlogic

#endif
