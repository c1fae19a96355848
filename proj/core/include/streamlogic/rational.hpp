#ifndef STREAMLOGIC_RATIONAL_HPP
#define STREAMLOGIC_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

namespace streamlogic {

// Exact arbitrary-precision fraction; always canonical (gcd 1, positive
// denominator). GMP keeps the invariants for us.
using Rational = mpq_class;
using Integer = mpz_class;

enum class Sign { NEG = -1, ZERO = 0, POS = 1 };

inline Sign sign_of(const Rational& q) {
    int s = sgn(q);
    return s < 0 ? Sign::NEG : (s > 0 ? Sign::POS : Sign::ZERO);
}

inline Sign sign_mul(Sign a, Sign b) {
    return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b));
}

inline Sign sign_neg(Sign a) { return static_cast<Sign>(-static_cast<int>(a)); }

// 2^k as an exact rational, k may be negative.
inline Rational pow2(long k) {
    Rational r(1);
    if (k >= 0)
        mpz_mul_2exp(r.get_num_mpz_t(), Integer(1).get_mpz_t(), static_cast<unsigned long>(k));
    else
        mpz_mul_2exp(r.get_den_mpz_t(), Integer(1).get_mpz_t(), static_cast<unsigned long>(-k));
    return r;
}

// Exact rational square root, or nullopt if q is not the square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
    if (sgn(q) < 0) return std::nullopt;
    Integer num_root, den_root;
    if (!mpz_perfect_square_p(q.get_num_mpz_t())) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_den_mpz_t())) return std::nullopt;
    mpz_sqrt(num_root.get_mpz_t(), q.get_num_mpz_t());
    mpz_sqrt(den_root.get_mpz_t(), q.get_den_mpz_t());
    return Rational(num_root, den_root);
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

} // namespace streamlogic

#endif
