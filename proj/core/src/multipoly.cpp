#include "streamlogic/multipoly.hpp"

#include <numeric>
#include <sstream>

#include "streamlogic/errors.hpp"

namespace streamlogic {

namespace {

unsigned total_degree(const Monomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

Monomial trim(Monomial m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
    return m;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

} // namespace

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        unsigned ea = i < a.size() ? a[i] : 0;
        unsigned eb = i < b.size() ? b[i] : 0;
        if (ea != eb) return ea > eb;
    }
    return false;
}

MultiPoly::MultiPoly(Rational c) {
    if (sgn(c) != 0) terms_.emplace(Monomial{}, std::move(c));
}

MultiPoly MultiPoly::var(int v) {
    Monomial m(v + 1, 0);
    m[v] = 1;
    return term(Rational(1), m);
}

MultiPoly MultiPoly::term(const Rational& c, Monomial m) {
    MultiPoly p;
    if (sgn(c) != 0) p.terms_.emplace(trim(std::move(m)), c);
    return p;
}

MultiPoly MultiPoly::from_unipoly(const UniPoly& p, int v) {
    MultiPoly r;
    for (int i = 0; i <= p.degree(); ++i) {
        if (sgn(p.coeff(i)) == 0) continue;
        Monomial m(v + 1, 0);
        m[v] = static_cast<unsigned>(i);
        r.add_term(trim(std::move(m)), p.coeff(i));
    }
    return r;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

const Rational& MultiPoly::constant_value() const {
    static const Rational zero(0);
    if (terms_.empty()) return zero;
    return terms_.begin()->second;
}

void MultiPoly::add_term(const Monomial& m, const Rational& c) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (sgn(c) != 0) terms_.emplace(m, c);
    } else {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(trim(mono_mul(ma, mb)), ca * cb);
    return r;
}

bool MultiPoly::operator<(const MultiPoly& o) const {
    auto it = terms_.begin(), jt = o.terms_.begin();
    GrlexLess less;
    for (; it != terms_.end() && jt != o.terms_.end(); ++it, ++jt) {
        if (less(it->first, jt->first)) return true;
        if (less(jt->first, it->first)) return false;
        if (it->second < jt->second) return true;
        if (jt->second < it->second) return false;
    }
    return it == terms_.end() && jt != o.terms_.end();
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
    MultiPoly r;
    if (sgn(c) == 0) return r;
    for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
    return r;
}

MultiPoly MultiPoly::pow(unsigned n) const {
    MultiPoly r{Rational(1)};
    MultiPoly base = *this;
    while (n > 0) {
        if (n & 1u) r = r * base;
        base = base * base;
        n >>= 1u;
    }
    return r;
}

int MultiPoly::degree_in(int v) const {
    int d = 0;
    for (const auto& [m, c] : terms_)
        if (v < static_cast<int>(m.size())) d = std::max(d, static_cast<int>(m[v]));
    return d;
}

std::set<int> MultiPoly::variables() const {
    std::set<int> vs;
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) vs.insert(static_cast<int>(i));
    return vs;
}

bool MultiPoly::vars_subset_of(const std::set<int>& vs) const {
    for (const auto& [m, c] : terms_)
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0 && !vs.count(static_cast<int>(i))) return false;
    return true;
}

std::vector<MultiPoly> MultiPoly::coeffs_in(int v) const {
    std::vector<MultiPoly> cs(degree_in(v) + 1);
    for (const auto& [m, c] : terms_) {
        unsigned e = v < static_cast<int>(m.size()) ? m[v] : 0;
        Monomial rest = m;
        if (v < static_cast<int>(rest.size())) rest[v] = 0;
        cs[e].add_term(trim(std::move(rest)), c);
    }
    return cs;
}

MultiPoly MultiPoly::from_coeffs(const std::vector<MultiPoly>& cs, int v) {
    MultiPoly r;
    MultiPoly xv = var(v);
    for (size_t i = 0; i < cs.size(); ++i) r = r + cs[i] * xv.pow(static_cast<unsigned>(i));
    return r;
}

MultiPoly MultiPoly::derivative(int v) const {
    MultiPoly r;
    for (const auto& [m, c] : terms_) {
        unsigned e = v < static_cast<int>(m.size()) ? m[v] : 0;
        if (e == 0) continue;
        Monomial d = m;
        d[v] = e - 1;
        r.add_term(trim(std::move(d)), c * Rational(static_cast<long>(e)));
    }
    return r;
}

UniPoly MultiPoly::to_unipoly(int v) const {
    std::vector<Rational> cs(degree_in(v) + 1, Rational(0));
    for (const auto& [m, c] : terms_) {
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0 && static_cast<int>(i) != v)
                throw Error(ErrorCode::INTERNAL, "to_unipoly: polynomial not univariate");
        unsigned e = v < static_cast<int>(m.size()) ? m[v] : 0;
        cs[e] = c;
    }
    return UniPoly(std::move(cs));
}

Rational MultiPoly::eval(const std::map<int, Rational>& assignment) const {
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            auto it = assignment.find(static_cast<int>(i));
            if (it == assignment.end())
                throw Error(ErrorCode::UNBOUND_VARIABLE,
                            "eval: variable " + std::to_string(i) + " unassigned");
            Rational p = it->second;
            for (unsigned k = 0; k < m[i]; ++k) t *= p;
        }
        acc += t;
    }
    return acc;
}

MultiPoly MultiPoly::primitive_part() const {
    if (terms_.empty()) return {};
    Integer num_gcd(0), den_lcm(1);
    for (const auto& [m, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    return scaled(Rational(1) / content);
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    // Print highest grlex terms first.
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational ac = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
            first = false;
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        bool printed = false;
        if (!(ac == 1) || m.empty()) {
            os << ac.get_str();
            printed = true;
        }
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (printed) os << "*";
            os << (i < names.size() ? names[i] : "v" + std::to_string(i));
            if (m[i] > 1) os << "^" << m[i];
            printed = true;
        }
    }
    return os.str();
}

Sign eval_sign(const MultiPoly& p, const std::map<int, Rational>& assignment) {
    return sign_of(p.eval(assignment));
}

PseudoDivision pseudo_division(const MultiPoly& p, const MultiPoly& q, int var) {
    int dq = q.degree_in(var);
    if (dq == 0) throw Error(ErrorCode::DEGENERATE_DIVISOR, "pseudo_division: divisor constant in variable");
    MultiPoly lead = q.coeffs_in(var)[dq];
    MultiPoly quot, rem = p;
    MultiPoly xv = MultiPoly::var(var);
    int dp = p.degree_in(var);
    int k = dp >= dq ? dp - dq + 1 : 0;
    int performed = 0;
    int dr = rem.is_zero() ? -1 : rem.degree_in(var);
    while (!rem.is_zero() && dr >= dq) {
        MultiPoly rl = rem.coeffs_in(var)[dr];
        // lead * rem = (rl * x^(dr-dq)) * q + next
        MultiPoly t = rl * xv.pow(static_cast<unsigned>(dr - dq));
        quot = quot * lead + t;
        rem = rem * lead - t * q;
        ++performed;
        dr = rem.is_zero() ? -1 : rem.degree_in(var);
    }
    // Classical normalization: multiplier is lead^(deg p - deg q + 1).
    for (int i = performed; i < k; ++i) {
        quot = quot * lead;
        rem = rem * lead;
    }
    return {quot, rem, lead.pow(static_cast<unsigned>(k))};
}

} // namespace streamlogic
