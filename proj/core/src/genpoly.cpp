#include "streamlogic/genpoly.hpp"

#include "streamlogic/errors.hpp"

namespace streamlogic {

GenTable::GenTable() {
    terms_.push_back(Term::x_const());
    index_["X"] = 0;
}

int GenTable::intern(const TermPtr& t) {
    std::string key = term_to_string(t);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(terms_.size());
    terms_.push_back(t);
    index_[key] = idx;
    return idx;
}

int GenTable::intern_var(const std::string& name) { return intern(Term::var(name)); }

int GenTable::lookup(const TermPtr& t) const {
    auto it = index_.find(term_to_string(t));
    return it == index_.end() ? -1 : it->second;
}

std::vector<std::string> GenTable::names() const {
    std::vector<std::string> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(term_to_string(t));
    return out;
}

MultiPoly term_to_poly(const TermPtr& t, GenTable& gens, bool opaque) {
    switch (t->kind) {
        case TermKind::RatConst:
            return MultiPoly(t->rat);
        case TermKind::XConst:
            return MultiPoly::var(GenTable::kShift);
        case TermKind::Var:
            return MultiPoly::var(gens.intern(t));
        case TermKind::Add:
            return term_to_poly(t->a, gens, opaque) + term_to_poly(t->b, gens, opaque);
        case TermKind::Sub:
            return term_to_poly(t->a, gens, opaque) - term_to_poly(t->b, gens, opaque);
        case TermKind::Mul:
            return term_to_poly(t->a, gens, opaque) * term_to_poly(t->b, gens, opaque);
        case TermKind::Neg:
            return -term_to_poly(t->a, gens, opaque);
        case TermKind::Cons:
            // cons(r, s) = r + X * s
            return term_to_poly(t->a, gens, opaque) +
                   MultiPoly::var(GenTable::kShift) * term_to_poly(t->b, gens, opaque);
        case TermKind::Hd:
        case TermKind::Tl:
        case TermKind::StreamConst:
            if (opaque) return MultiPoly::var(gens.intern(t));
            throw Error(ErrorCode::UNSUPPORTED_FRAGMENT,
                        "term not reducible to a polynomial: " + term_to_string(t));
    }
    throw Error(ErrorCode::INTERNAL, "term_to_poly: bad term kind");
}

TermPtr poly_to_term(const MultiPoly& p, const GenTable& gens) {
    if (p.is_zero()) return Term::rat_const(Rational(0));
    TermPtr acc;
    for (const auto& [mono, coeff] : p.terms()) {
        TermPtr t;
        if (coeff != Rational(1) || mono.empty()) t = Term::rat_const(coeff);
        for (size_t v = 0; v < mono.size(); ++v) {
            for (unsigned e = 0; e < mono[v]; ++e) {
                TermPtr g = gens.term_of(static_cast<int>(v));
                t = t ? Term::mul(t, g) : g;
            }
        }
        acc = acc ? Term::add(acc, t) : t;
    }
    return acc;
}

} // namespace streamlogic
