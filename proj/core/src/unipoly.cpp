#include "streamlogic/unipoly.hpp"

#include <algorithm>
#include <sstream>

#include "streamlogic/errors.hpp"

namespace streamlogic {

UniPoly::UniPoly(Rational c) {
    if (sgn(c) != 0) coeffs_.push_back(std::move(c));
}

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::monomial(const Rational& c, int degree) {
    if (sgn(c) == 0) return {};
    std::vector<Rational> cs(degree + 1, Rational(0));
    cs[degree] = c;
    return UniPoly(std::move(cs));
}

UniPoly UniPoly::x() { return monomial(Rational(1), 1); }

void UniPoly::trim() {
    while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

int UniPoly::low_degree() const {
    for (size_t i = 0; i < coeffs_.size(); ++i)
        if (sgn(coeffs_[i]) != 0) return static_cast<int>(i);
    return -1;
}

const Rational& UniPoly::coeff(int i) const {
    static const Rational zero(0);
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return zero;
    return coeffs_[i];
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<Rational> r(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r[i] = coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + (-o); }

UniPoly UniPoly::operator-() const {
    std::vector<Rational> r(coeffs_);
    for (auto& c : r) c = -c;
    return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(const UniPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<Rational> r(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (sgn(coeffs_[i]) == 0) continue;
        for (size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::scaled(const Rational& c) const {
    if (sgn(c) == 0) return {};
    std::vector<Rational> r(coeffs_);
    for (auto& x : r) x *= c;
    return UniPoly(std::move(r));
}

UniPoly UniPoly::shifted(int k) const {
    if (is_zero()) return {};
    std::vector<Rational> r(coeffs_.size() + k, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r[i + k] = coeffs_[i];
    return UniPoly(std::move(r));
}

UniPoly UniPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> r(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) r[i - 1] = coeffs_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(r));
}

Rational UniPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& p, const UniPoly& q) {
    if (q.is_zero()) throw Error(ErrorCode::DIV_BY_ZERO, "univariate division by zero");
    UniPoly rem = p;
    UniPoly quot;
    while (!rem.is_zero() && rem.degree() >= q.degree()) {
        Rational c = rem.lead() / q.lead();
        int d = rem.degree() - q.degree();
        UniPoly t = UniPoly::monomial(c, d);
        quot = quot + t;
        rem = rem - t * q;
    }
    return {quot, rem};
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.scaled(Rational(1) / a.lead());
}

UniPoly UniPoly::square_free_part() const {
    if (is_zero() || degree() == 0) return *this;
    UniPoly g = gcd(*this, derivative());
    if (g.degree() == 0) return *this;
    return divmod(*this, g).first;
}

std::string UniPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        const Rational& c = coeffs_[i];
        if (sgn(c) == 0) continue;
        Rational ac = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
            first = false;
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        bool unit = (ac == 1);
        if (i == 0) {
            os << ac.get_str();
        } else {
            if (!unit) os << ac.get_str() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

namespace {

// Sign variation count of a Sturm chain at x (ENDPOINT_ROOT if p(x) = 0).
int sign_variations_at(const std::vector<UniPoly>& chain, const Rational& x) {
    int last = 0, vars = 0;
    for (const auto& q : chain) {
        int s = sgn(q.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++vars;
        last = s;
    }
    return vars;
}

std::vector<UniPoly> sturm_chain(const UniPoly& p) {
    std::vector<UniPoly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero()) {
        const UniPoly& a = chain[chain.size() - 2];
        const UniPoly& b = chain.back();
        UniPoly r = UniPoly::divmod(a, b).second;
        chain.push_back(-r);
    }
    chain.pop_back();
    return chain;
}

} // namespace

int sturm_count(const UniPoly& p, const Rational& a, const Rational& b) {
    if (!(a < b)) throw Error(ErrorCode::INTERNAL, "sturm_count: empty interval");
    if (p.is_zero()) throw Error(ErrorCode::INTERNAL, "sturm_count: zero polynomial");
    if (sgn(p.eval(a)) == 0 || sgn(p.eval(b)) == 0)
        throw Error(ErrorCode::ENDPOINT_ROOT, "sturm_count: root at interval endpoint");
    UniPoly sf = p.square_free_part();
    auto chain = sturm_chain(sf);
    return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

Rational root_bound(const UniPoly& p) {
    // Cauchy bound: 1 + max |a_i| / |a_n|.
    Rational m(0);
    for (int i = 0; i < p.degree(); ++i) {
        Rational a = abs(p.coeff(i));
        if (a > m) m = a;
    }
    return Rational(1) + m / abs(p.lead());
}

std::vector<std::pair<Rational, Rational>> isolate_roots(const UniPoly& p) {
    std::vector<std::pair<Rational, Rational>> out;
    if (p.is_zero() || p.degree() == 0) return out;
    UniPoly sf = p.square_free_part();
    auto chain = sturm_chain(sf);
    Rational bound = root_bound(sf);

    auto count = [&](const Rational& a, const Rational& b) {
        return sign_variations_at(chain, a) - sign_variations_at(chain, b);
    };
    // Endpoints of bisection intervals are never roots: start just outside the
    // root bound and split at points checked against sf.
    struct Seg { Rational a, b; int n; };
    std::vector<Seg> work;
    int total = count(-bound, bound);
    if (total > 0) work.push_back({-bound, bound, total});
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        if (s.n == 1) {
            out.push_back({s.a, s.b});
            continue;
        }
        Rational mid = (s.a + s.b) / 2;
        while (sgn(sf.eval(mid)) == 0) mid = (s.a + mid) / 2; // nudge off a root
        int left = count(s.a, mid);
        if (left > 0) work.push_back({s.a, mid, left});
        if (s.n - left > 0) work.push_back({mid, s.b, s.n - left});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
}

} // namespace streamlogic
