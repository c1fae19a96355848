#include "streamlogic/expand.hpp"

#include <functional>
#include <optional>

#include "streamlogic/errors.hpp"
#include "streamlogic/genpoly.hpp"

namespace streamlogic {

namespace {

// ---------------------------------------------------------------------------
// Ground evaluation

Rational head_value(const LaurentRational& v) {
    Rational r = v.is_zero() ? Rational(0) : v.coeff_at(0);
    if (!(v == LaurentRational::constant(r)))
        throw Error(ErrorCode::UNSUPPORTED_FRAGMENT,
                    "cons head does not denote a real: " + v.to_string());
    return r;
}

bool divides_semantics(const LaurentRational& s, const LaurentRational& t) {
    // s | t over power series: some h in S with t = s * h.
    if (t.is_zero()) return true;
    if (s.is_zero()) return false;
    Valuation v = (t / s).valuation();
    return v.finite && v.value >= 0;
}

} // namespace

LaurentRational evaluate_term(const TermPtr& t, const std::map<std::string, LaurentRational>& env) {
    switch (t->kind) {
        case TermKind::Var: {
            auto it = env.find(t->name);
            if (it == env.end())
                throw Error(ErrorCode::UNBOUND_VARIABLE, "unbound variable " + t->name);
            return it->second;
        }
        case TermKind::RatConst: return LaurentRational::constant(t->rat);
        case TermKind::XConst: return LaurentRational::x();
        case TermKind::StreamConst: return t->stream;
        case TermKind::Add: return evaluate_term(t->a, env) + evaluate_term(t->b, env);
        case TermKind::Sub: return evaluate_term(t->a, env) - evaluate_term(t->b, env);
        case TermKind::Mul: return evaluate_term(t->a, env) * evaluate_term(t->b, env);
        case TermKind::Neg: return -evaluate_term(t->a, env);
        case TermKind::Hd:
            return LaurentRational::constant(evaluate_term(t->a, env).hd());
        case TermKind::Tl: return evaluate_term(t->a, env).tl();
        case TermKind::Cons:
            return cons(head_value(evaluate_term(t->a, env)), evaluate_term(t->b, env));
    }
    throw Error(ErrorCode::INTERNAL, "evaluate_term: bad kind");
}

bool evaluate_ground(const FormulaPtr& f, const std::map<std::string, LaurentRational>& env) {
    switch (f->kind) {
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Atomic: {
            LaurentRational l = evaluate_term(f->atom.lhs, env);
            LaurentRational r = evaluate_term(f->atom.rhs, env);
            switch (f->atom.rel) {
                case Rel::EQ: return l == r;
                case Rel::LE: return compare(l, r) != Ordering::GT;
                case Rel::LT: return compare(l, r) == Ordering::LT;
                case Rel::DIVIDES: return divides_semantics(l, r);
            }
            throw Error(ErrorCode::INTERNAL, "bad relation");
        }
        case FKind::Not: return !evaluate_ground(f->a, env);
        case FKind::And: return evaluate_ground(f->a, env) && evaluate_ground(f->b, env);
        case FKind::Or: return evaluate_ground(f->a, env) || evaluate_ground(f->b, env);
        case FKind::Implies: return !evaluate_ground(f->a, env) || evaluate_ground(f->b, env);
        case FKind::Iff: return evaluate_ground(f->a, env) == evaluate_ground(f->b, env);
        case FKind::Forall:
        case FKind::Exists:
            throw Error(ErrorCode::NOT_GROUND, "quantifier in ground evaluation");
    }
    throw Error(ErrorCode::INTERNAL, "evaluate_ground: bad kind");
}

// ---------------------------------------------------------------------------
// Formula walking helpers

namespace {

using TermFn = std::function<TermPtr(const TermPtr&)>;

FormulaPtr map_atoms(const FormulaPtr& f, const std::function<FormulaPtr(const Atom&)>& fn) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atomic: return fn(f->atom);
        case FKind::Not: return Formula::negation(map_atoms(f->a, fn));
        case FKind::And: return Formula::conj(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case FKind::Or: return Formula::disj(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case FKind::Implies: return Formula::implies(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case FKind::Iff: return Formula::iff(map_atoms(f->a, fn), map_atoms(f->b, fn));
        case FKind::Forall: return Formula::forall(f->var, f->sort, map_atoms(f->a, fn));
        case FKind::Exists: return Formula::exists(f->var, f->sort, map_atoms(f->a, fn));
    }
    throw Error(ErrorCode::INTERNAL, "map_atoms: bad kind");
}

FormulaPtr map_terms(const FormulaPtr& f, const TermFn& fn) {
    return map_atoms(f, [&](const Atom& at) {
        return Formula::atomic(fn(at.lhs), at.rel, fn(at.rhs));
    });
}

TermPtr rewrite_subterms(const TermPtr& t, const TermFn& leaf) {
    TermPtr r;
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::RatConst:
        case TermKind::XConst:
        case TermKind::StreamConst: r = t; break;
        case TermKind::Add: r = Term::add(rewrite_subterms(t->a, leaf), rewrite_subterms(t->b, leaf)); break;
        case TermKind::Sub: r = Term::sub(rewrite_subterms(t->a, leaf), rewrite_subterms(t->b, leaf)); break;
        case TermKind::Mul: r = Term::mul(rewrite_subterms(t->a, leaf), rewrite_subterms(t->b, leaf)); break;
        case TermKind::Neg: r = Term::neg(rewrite_subterms(t->a, leaf)); break;
        case TermKind::Hd: r = Term::hd(rewrite_subterms(t->a, leaf)); break;
        case TermKind::Tl: r = Term::tl(rewrite_subterms(t->a, leaf)); break;
        case TermKind::Cons: r = Term::cons(rewrite_subterms(t->a, leaf), rewrite_subterms(t->b, leaf)); break;
    }
    return leaf(r);
}

// Replace every subterm equal to `target` by `repl`, bottom up.
TermPtr replace_term(const TermPtr& t, const TermPtr& target, const TermPtr& repl) {
    return rewrite_subterms(t, [&](const TermPtr& u) {
        return term_equal(u, target) ? repl : u;
    });
}

FormulaPtr replace_in_formula(const FormulaPtr& f, const TermPtr& target, const TermPtr& repl) {
    return map_terms(f, [&](const TermPtr& t) { return replace_term(t, target, repl); });
}

bool term_contains(const TermPtr& t, TermKind k) {
    if (t->kind == k) return true;
    if (t->a && term_contains(t->a, k)) return true;
    if (t->b && term_contains(t->b, k)) return true;
    return false;
}

bool term_contains_term(const TermPtr& t, const TermPtr& target) {
    if (term_equal(t, target)) return true;
    if (t->a && term_contains_term(t->a, target)) return true;
    if (t->b && term_contains_term(t->b, target)) return true;
    return false;
}

bool formula_contains_term(const FormulaPtr& f, const TermPtr& target) {
    bool found = false;
    map_terms(f, [&](const TermPtr& t) {
        if (term_contains_term(t, target)) found = true;
        return t;
    });
    return found;
}

bool has_stream_ops(const TermPtr& t) {
    return term_contains(t, TermKind::Hd) || term_contains(t, TermKind::Tl) ||
           term_contains(t, TermKind::Cons);
}

} // namespace

// ---------------------------------------------------------------------------
// expand_constants

namespace {

TermPtr unipoly_to_term(const UniPoly& p) {
    if (p.is_zero()) return Term::rat_const(Rational(0));
    TermPtr acc;
    for (int i = 0; i <= p.degree(); ++i) {
        const Rational& c = p.coeff(i);
        if (c == 0) continue;
        TermPtr mono;
        if (i == 0) {
            mono = Term::rat_const(c);
        } else {
            mono = Term::x_const();
            for (int k = 1; k < i; ++k) mono = Term::mul(mono, Term::x_const());
            if (c != 1) mono = Term::mul(Term::rat_const(c), mono);
        }
        acc = acc ? Term::add(acc, mono) : mono;
    }
    return acc;
}

struct Frac {
    TermPtr num;
    UniPoly den;
};

Frac clear_term(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
        case TermKind::RatConst:
        case TermKind::XConst:
            return {t, UniPoly(Rational(1))};
        case TermKind::StreamConst:
            return {unipoly_to_term(t->stream.num()), t->stream.den()};
        case TermKind::Add:
        case TermKind::Sub: {
            Frac l = clear_term(t->a), r = clear_term(t->b);
            TermPtr ln = Term::mul(l.num, unipoly_to_term(r.den));
            TermPtr rn = Term::mul(r.num, unipoly_to_term(l.den));
            return {t->kind == TermKind::Add ? Term::add(ln, rn) : Term::sub(ln, rn),
                    l.den * r.den};
        }
        case TermKind::Mul: {
            Frac l = clear_term(t->a), r = clear_term(t->b);
            return {Term::mul(l.num, r.num), l.den * r.den};
        }
        case TermKind::Neg: {
            Frac a = clear_term(t->a);
            return {Term::neg(a.num), a.den};
        }
        default:
            throw Error(ErrorCode::INTERNAL, "clear_term on stream operation");
    }
}

TermPtr simplify_poly_term(const TermPtr& t) {
    GenTable gens;
    return poly_to_term(term_to_poly(t, gens, true), gens);
}

} // namespace

FormulaPtr expand_constants(const FormulaPtr& f) {
    return map_atoms(f, [&](const Atom& at) -> FormulaPtr {
        if (has_stream_ops(at.lhs) || has_stream_ops(at.rhs) || at.rel == Rel::DIVIDES)
            return Formula::atomic(at);
        if (!term_contains(at.lhs, TermKind::StreamConst) &&
            !term_contains(at.rhs, TermKind::StreamConst))
            return Formula::atomic(at);
        Frac l = clear_term(at.lhs), r = clear_term(at.rhs);
        // l.num/l.den ~ r.num/r.den  <=>  diff ~ 0 (equations) or
        // diff * den ~ 0 (order relations; the extra factor squares the sign).
        TermPtr diff = Term::sub(Term::mul(l.num, unipoly_to_term(r.den)),
                                 Term::mul(r.num, unipoly_to_term(l.den)));
        if (at.rel != Rel::EQ) diff = Term::mul(diff, unipoly_to_term(l.den * r.den));
        return Formula::atomic(simplify_poly_term(diff), at.rel, Term::rat_const(Rational(0)));
    });
}

// ---------------------------------------------------------------------------
// expand_divides

FormulaPtr expand_divides(const FormulaPtr& f) {
    std::set<std::string> used = all_vars(f);
    return map_atoms(f, [&](const Atom& at) -> FormulaPtr {
        if (at.rel != Rel::DIVIDES) return Formula::atomic(at);
        std::string h = fresh_name("h", used);
        return Formula::exists(h, Sort::S,
                               Formula::atomic(at.rhs, Rel::EQ, Term::mul(at.lhs, Term::var(h))));
    });
}

// ---------------------------------------------------------------------------
// relativize

namespace {

FormulaPtr series_guard(const std::string& x, std::set<std::string>& used) {
    std::string w = fresh_name("w", used);
    TermPtr xv = Term::var(x), wv = Term::var(w);
    // Over Laurent series, w*w = 1 + X*x*x has a solution iff v(x) >= 0: the
    // right-hand side has even valuation exactly then. The square condition
    // alone goes mute once quantifiers range over the real closure (every
    // positive element is a square there), so we conjoin the equivalent
    // convexity bound X*x*x <= 1, which stays faithful in the closure.
    TermPtr xx = Term::mul(Term::x_const(), Term::mul(xv, xv));
    TermPtr rhs = Term::add(Term::rat_const(Rational(1)), xx);
    return Formula::exists(
        w, Sort::L,
        Formula::conj(Formula::atomic(Term::mul(wv, wv), Rel::EQ, rhs),
                      Formula::atomic(xx, Rel::LE, Term::rat_const(Rational(1)))));
}

FormulaPtr relativize_rec(const FormulaPtr& f, std::set<std::string>& used) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False:
        case FKind::Atomic: return f;
        case FKind::Not: return Formula::negation(relativize_rec(f->a, used));
        case FKind::And: return Formula::conj(relativize_rec(f->a, used), relativize_rec(f->b, used));
        case FKind::Or: return Formula::disj(relativize_rec(f->a, used), relativize_rec(f->b, used));
        case FKind::Implies:
            return Formula::implies(relativize_rec(f->a, used), relativize_rec(f->b, used));
        case FKind::Iff: return Formula::iff(relativize_rec(f->a, used), relativize_rec(f->b, used));
        case FKind::Forall: {
            FormulaPtr body = relativize_rec(f->a, used);
            if (f->sort == Sort::L) return Formula::forall(f->var, Sort::L, body);
            return Formula::forall(f->var, Sort::L,
                                   Formula::implies(series_guard(f->var, used), body));
        }
        case FKind::Exists: {
            FormulaPtr body = relativize_rec(f->a, used);
            if (f->sort == Sort::L) return Formula::exists(f->var, Sort::L, body);
            return Formula::exists(f->var, Sort::L,
                                   Formula::conj(series_guard(f->var, used), body));
        }
    }
    throw Error(ErrorCode::INTERNAL, "relativize: bad kind");
}

} // namespace

FormulaPtr relativize(const FormulaPtr& f) {
    std::set<std::string> used = all_vars(f);
    return relativize_rec(f, used);
}

// ---------------------------------------------------------------------------
// eliminate_hd_tl

namespace {

bool is_scalar_factor(const TermPtr& t) {
    return t->kind == TermKind::RatConst || t->kind == TermKind::Hd;
}

// Homomorphic pushes: cons unfolding, hd through ring operations, tl through
// the additive structure and scalar multiples, both through constants.
TermPtr push_stream_ops(const TermPtr& t);

TermPtr push_hd(const TermPtr& u) {
    switch (u->kind) {
        case TermKind::Add: return Term::add(push_hd(u->a), push_hd(u->b));
        case TermKind::Sub: return Term::sub(push_hd(u->a), push_hd(u->b));
        case TermKind::Mul: return Term::mul(push_hd(u->a), push_hd(u->b));
        case TermKind::Neg: return Term::neg(push_hd(u->a));
        case TermKind::XConst: return Term::rat_const(Rational(0));
        case TermKind::RatConst: return u;
        case TermKind::Hd: return u; // hd of an embedded real is itself
        case TermKind::StreamConst: return Term::rat_const(u->stream.hd());
        default: return Term::hd(u);
    }
}

TermPtr push_tl(const TermPtr& u) {
    switch (u->kind) {
        case TermKind::Add: return Term::add(push_tl(u->a), push_tl(u->b));
        case TermKind::Sub: return Term::sub(push_tl(u->a), push_tl(u->b));
        case TermKind::Neg: return Term::neg(push_tl(u->a));
        case TermKind::XConst: return Term::rat_const(Rational(1));
        case TermKind::RatConst: return Term::rat_const(Rational(0));
        case TermKind::Hd: return Term::rat_const(Rational(0));
        case TermKind::StreamConst: return Term::stream_const(u->stream.tl());
        case TermKind::Mul:
            if (is_scalar_factor(u->a)) return Term::mul(u->a, push_tl(u->b));
            if (is_scalar_factor(u->b)) return Term::mul(u->b, push_tl(u->a));
            return Term::tl(u);
        default: return Term::tl(u);
    }
}

TermPtr push_stream_ops(const TermPtr& t) {
    return rewrite_subterms(t, [](const TermPtr& u) -> TermPtr {
        switch (u->kind) {
            case TermKind::Cons:
                // cons(hd(t), tl(t)) is t itself.
                if (u->a->kind == TermKind::Hd && u->b->kind == TermKind::Tl &&
                    term_equal(u->a->a, u->b->a))
                    return u->a->a;
                return Term::add(push_hd(u->a), Term::mul(Term::x_const(), u->b));
            case TermKind::Hd: return push_hd(u->a);
            case TermKind::Tl: return push_tl(u->a);
            default: return u;
        }
    });
}

// A head fact extracted from an equational atom: hd(subject) = value, with
// the originating atom remembered so the rewrite can drop or replace it.
struct HeadFact {
    TermPtr subject;
    Rational value;
};

// hd(s) = hd(t): tails differ by a fresh power series u with s = t + X * u.
struct HeadEq {
    TermPtr s, t;
};

// A pinned decomposition subject = head + X * tail read off an atom.
struct PinFact {
    std::string var;
    Rational head;
    MultiPoly tail;  // over the atom's generator table
    bool clean;      // tail free of hd(var)/tl(var)
};

struct AtomAnalysis {
    GenTable gens;
    MultiPoly p;
    std::optional<HeadFact> head;
    std::optional<HeadEq> headeq;
    std::optional<PinFact> pin;
};

bool monomial_is_single(const Monomial& m, int v) {
    if (static_cast<int>(m.size()) != v + 1 || m[v] != 1) return false;
    for (int i = 0; i < v; ++i)
        if (m[i] != 0) return false;
    return true;
}

std::optional<AtomAnalysis> analyze_atom(const Atom& at) {
    if (at.rel != Rel::EQ) return std::nullopt;
    AtomAnalysis an;
    an.p = term_to_poly(at.lhs, an.gens, true) - term_to_poly(at.rhs, an.gens, true);

    std::vector<int> hd_gens, tl_gens, var_gens;
    for (int i = 1; i < an.gens.size(); ++i) {
        if (!an.p.depends_on(i)) continue;
        switch (an.gens.term_of(i)->kind) {
            case TermKind::Hd: hd_gens.push_back(i); break;
            case TermKind::Tl: tl_gens.push_back(i); break;
            case TermKind::Var: var_gens.push_back(i); break;
            default: break;
        }
    }

    // Head shape: sum of rational multiples of hd terms plus a constant.
    if (!hd_gens.empty() && tl_gens.empty()) {
        bool ok = true;
        Rational c(0);
        TermPtr subject;
        std::map<int, Rational> lin;
        for (const auto& [mono, coeff] : an.p.terms()) {
            if (mono.empty()) { c = coeff; continue; }
            bool single = false;
            for (int g : hd_gens)
                if (monomial_is_single(mono, g)) {
                    lin[g] = coeff;
                    single = true;
                    break;
                }
            if (!single) { ok = false; break; }
        }
        if (ok && lin.size() == 2 && c == 0) {
            auto it = lin.begin();
            auto [g1, a1] = *it++;
            auto [g2, a2] = *it;
            if (a1 == -a2) {
                an.headeq = HeadEq{an.gens.term_of(a1 > 0 ? g1 : g2)->a,
                                   an.gens.term_of(a1 > 0 ? g2 : g1)->a};
                return an;
            }
        }
        if (ok && !lin.empty()) {
            for (const auto& [g, coeff] : lin) {
                TermPtr arg = an.gens.term_of(g)->a;
                TermPtr piece = coeff == 1 ? arg : Term::mul(Term::rat_const(coeff), arg);
                subject = subject ? Term::add(subject, piece) : piece;
            }
            an.head = HeadFact{subject, -c};
            return an;
        }
    }

    // Pin shape: the atom solves some variable as y = c + X * tail, read off
    // a lone degree-one y monomial; y itself may recur inside the tail.
    for (int y : var_gens) {
        Rational a(0);
        for (const auto& [mono, coeff] : an.p.terms())
            if (monomial_is_single(mono, y)) { a = coeff; break; }
        if (a == 0) continue;
        MultiPoly r = (MultiPoly::var(y).scaled(a) - an.p).scaled(Rational(1) / a);
        Rational c(0);
        MultiPoly tail; // (r - c) / X
        bool shaped = true;
        for (const auto& [mono, coeff] : r.terms()) {
            if (mono.empty()) { c = coeff; continue; }
            if (static_cast<int>(mono.size()) <= GenTable::kShift ||
                mono[GenTable::kShift] == 0) { shaped = false; break; }
            Monomial m2 = mono;
            m2[GenTable::kShift] -= 1;
            while (!m2.empty() && m2.back() == 0) m2.pop_back();
            tail = tail + MultiPoly::term(coeff, m2);
        }
        if (!shaped) continue;
        TermPtr yv = an.gens.term_of(y);
        bool clean = true;
        for (int g = 1; g < an.gens.size(); ++g) {
            if (!tail.depends_on(g)) continue;
            const TermPtr& gt = an.gens.term_of(g);
            if ((gt->kind == TermKind::Hd || gt->kind == TermKind::Tl) &&
                term_contains_term(gt, yv))
                clean = false;
        }
        an.pin = PinFact{an.gens.term_of(y)->name, c, tail, clean};
        return an;
    }
    return std::nullopt;
}

struct Rewriter {
    std::set<std::string> used;
    ExpansionReport report;
    bool changed = false;
    bool allow_standalone = false;

    std::vector<FormulaPtr> conjuncts(const FormulaPtr& f) {
        if (f->kind == FKind::And) {
            auto l = conjuncts(f->a), r = conjuncts(f->b);
            l.insert(l.end(), r.begin(), r.end());
            return l;
        }
        return {f};
    }

    static FormulaPtr conj_of(const std::vector<FormulaPtr>& fs) {
        FormulaPtr acc = Formula::truth(true);
        for (const auto& g : fs) acc = Formula::conj(acc, g);
        return acc;
    }

    // Try to use a head or pin fact from conjunct `i` of `parts` to rewrite
    // the whole cluster; `tail_scope` is the full region the substitution may
    // touch (the cluster itself, plus the consequent for antecedent facts).
    struct Applied {
        std::vector<FormulaPtr> parts;
        FormulaPtr extra;   // rewritten consequent, when present
        FormulaPtr def;     // definitional atom to adjoin
        std::string fresh;  // quantified variable, empty for clean pins
    };

    std::optional<Applied> apply_fact(std::vector<FormulaPtr> parts, size_t i,
                                      const FormulaPtr& extra) {
        const FormulaPtr& af = parts[i];
        if (af->kind != FKind::Atomic) return std::nullopt;
        auto an = analyze_atom(af->atom);
        if (!an) return std::nullopt;

        auto everything = [&](const std::function<bool(const FormulaPtr&)>& pr) {
            for (size_t k = 0; k < parts.size(); ++k)
                if (k != i && pr(parts[k])) return true;
            return extra && pr(extra);
        };
        auto subst_all = [&](const TermPtr& from, const TermPtr& to, Applied& out) {
            for (size_t k = 0; k < out.parts.size(); ++k)
                if (k != i) out.parts[k] = replace_in_formula(out.parts[k], from, to);
            if (out.extra) out.extra = replace_in_formula(out.extra, from, to);
        };

        if (an->headeq) {
            const HeadEq& he = *an->headeq;
            std::string u = fresh_name("u", used);
            Applied out{parts, extra, nullptr, u};
            out.def = Formula::atomic(
                he.s, Rel::EQ,
                Term::add(he.t, Term::mul(Term::x_const(), Term::var(u))));
            out.parts[i] = Formula::truth(true);
            subst_all(Term::hd(he.s), Term::hd(he.t), out);
            subst_all(Term::tl(he.s), Term::add(Term::tl(he.t), Term::var(u)), out);
            report.rules.push_back("head-eq");
            report.introduced.push_back(u);
            return out;
        }

        if (an->head) {
            const HeadFact& hf = *an->head;
            TermPtr hd_t = Term::hd(hf.subject);
            TermPtr tl_t = Term::tl(hf.subject);
            // Only profitable when it either pins a used tail or removes the
            // last head obstruction; always profitable as atom elimination.
            std::string u = fresh_name("u", used);
            Applied out{parts, extra, nullptr, u};
            // subject = value + X * u replaces the head atom.
            out.def = Formula::atomic(
                hf.subject, Rel::EQ,
                Term::add(Term::rat_const(hf.value),
                          Term::mul(Term::x_const(), Term::var(u))));
            out.parts[i] = Formula::truth(true);
            subst_all(hd_t, Term::rat_const(hf.value), out);
            subst_all(tl_t, Term::var(u), out);
            report.rules.push_back("head");
            report.introduced.push_back(u);
            return out;
        }

        if (an->pin) {
            const PinFact& pf = *an->pin;
            TermPtr yv = Term::var(pf.var);
            TermPtr hd_t = Term::hd(yv);
            TermPtr tl_t = Term::tl(yv);
            bool wanted = everything([&](const FormulaPtr& g) {
                return formula_contains_term(g, hd_t) || formula_contains_term(g, tl_t);
            });
            if (!wanted && pf.clean) return std::nullopt;
            if (pf.clean) {
                Applied out{parts, extra, nullptr, ""};
                subst_all(hd_t, Term::rat_const(pf.head), out);
                subst_all(tl_t, push_stream_ops(poly_to_term(pf.tail, an->gens)), out);
                report.rules.push_back("pin");
                return out;
            }
            if (!wanted &&
                !formula_contains_term(af, hd_t) && !formula_contains_term(af, tl_t))
                return std::nullopt;
            std::string u = fresh_name("u", used);
            Applied out{parts, extra, nullptr, u};
            out.def = Formula::atomic(
                yv, Rel::EQ,
                Term::add(Term::rat_const(pf.head),
                          Term::mul(Term::x_const(), Term::var(u))));
            // Under the definition the source atom says u = tail.
            TermPtr tail_t = push_stream_ops(poly_to_term(pf.tail, an->gens));
            tail_t = replace_term(replace_term(tail_t, hd_t, Term::rat_const(pf.head)),
                                  tl_t, Term::var(u));
            out.parts[i] = Formula::atomic(Term::var(u), Rel::EQ, tail_t);
            subst_all(hd_t, Term::rat_const(pf.head), out);
            subst_all(tl_t, Term::var(u), out);
            report.rules.push_back("pin-rec");
            report.introduced.push_back(u);
            return out;
        }
        return std::nullopt;
    }

    FormulaPtr rewrite(const FormulaPtr& f) {
        switch (f->kind) {
            case FKind::True:
            case FKind::False: return f;
            case FKind::Not: return Formula::negation(rewrite(f->a));
            case FKind::Or: return Formula::disj(rewrite(f->a), rewrite(f->b));
            case FKind::Iff: return Formula::iff(rewrite(f->a), rewrite(f->b));
            case FKind::Forall: return Formula::forall(f->var, f->sort, rewrite(f->a));
            case FKind::Exists: return Formula::exists(f->var, f->sort, rewrite(f->a));
            case FKind::And: {
                auto parts = conjuncts(f);
                for (size_t i = 0; i < parts.size(); ++i) {
                    auto ap = apply_fact(parts, i, nullptr);
                    if (!ap) continue;
                    changed = true;
                    FormulaPtr body = conj_of(ap->parts);
                    if (ap->def) body = Formula::conj(Formula::atomic(ap->def->atom), body);
                    if (!ap->fresh.empty()) body = Formula::exists(ap->fresh, Sort::S, body);
                    return body;
                }
                return Formula::conj(rewrite(f->a), rewrite(f->b));
            }
            case FKind::Implies: {
                auto parts = conjuncts(f->a);
                for (size_t i = 0; i < parts.size(); ++i) {
                    auto ap = apply_fact(parts, i, f->b);
                    if (!ap) continue;
                    changed = true;
                    FormulaPtr ante = conj_of(ap->parts);
                    if (ap->def) ante = Formula::conj(Formula::atomic(ap->def->atom), ante);
                    FormulaPtr body = Formula::implies(ante, ap->extra);
                    if (!ap->fresh.empty()) body = Formula::forall(ap->fresh, Sort::S, body);
                    return body;
                }
                return Formula::implies(rewrite(f->a), rewrite(f->b));
            }
            case FKind::Atomic: {
                if (!allow_standalone) return f;
                auto an = analyze_atom(f->atom);
                if (!an) return f;
                if (an->headeq) {
                    const HeadEq& he = *an->headeq;
                    std::string z = fresh_name("z", used);
                    changed = true;
                    report.rules.push_back("head-eq-solo");
                    report.introduced.push_back(z);
                    return Formula::exists(
                        z, Sort::S,
                        Formula::atomic(he.s, Rel::EQ,
                                        Term::add(he.t, Term::mul(Term::x_const(),
                                                                  Term::var(z)))));
                }
                if (!an->head) return f;
                const HeadFact& hf = *an->head;
                // hd(s) = c  <=>  exists z : S. s = c + X z
                std::string z = fresh_name("z", used);
                changed = true;
                report.rules.push_back("head-solo");
                report.introduced.push_back(z);
                return Formula::exists(
                    z, Sort::S,
                    Formula::atomic(hf.subject, Rel::EQ,
                                    Term::add(Term::rat_const(hf.value),
                                              Term::mul(Term::x_const(), Term::var(z)))));
            }
        }
        throw Error(ErrorCode::INTERNAL, "rewrite: bad kind");
    }
};

} // namespace

namespace {

// Polynomial-normalize equations and inequalities so that substituted heads
// and tails cancel syntactically; hd/tl subterms stay opaque generators.
FormulaPtr normalize_atoms(const FormulaPtr& f) {
    return map_atoms(f, [](const Atom& at) -> FormulaPtr {
        if (at.rel == Rel::DIVIDES) return Formula::atomic(at);
        GenTable gens;
        MultiPoly p = term_to_poly(at.lhs, gens, true) - term_to_poly(at.rhs, gens, true);
        if (p.is_zero()) {
            if (at.rel == Rel::LT) return Formula::truth(false);
            return Formula::truth(true);
        }
        return Formula::atomic(poly_to_term(p, gens), at.rel, Term::rat_const(Rational(0)));
    });
}

} // namespace

std::pair<FormulaPtr, ExpansionReport> eliminate_hd_tl(const FormulaPtr& f) {
    Rewriter rw;
    rw.used = all_vars(f);
    FormulaPtr g = normalize_atoms(map_terms(f, push_stream_ops));
    for (int round = 0; round < 200; ++round) {
        rw.changed = false;
        rw.allow_standalone = false;
        FormulaPtr g2 = rw.rewrite(g);
        if (!rw.changed) {
            rw.allow_standalone = true;
            g2 = rw.rewrite(g);
        }
        if (!rw.changed) break;
        g = normalize_atoms(map_terms(g2, push_stream_ops));
    }
    // Anything hd/tl still standing is out of the definitional fragment.
    map_terms(g, [&](const TermPtr& t) {
        rewrite_subterms(t, [&](const TermPtr& u) {
            if (u->kind == TermKind::Hd || u->kind == TermKind::Tl)
                rw.report.residual.push_back(term_to_string(u));
            return u;
        });
        return t;
    });
    return {g, rw.report};
}

FormulaPtr bisim_formula(const FormulaPtr& body, const std::string& x, const std::string& y) {
    TermPtr xv = Term::var(x), yv = Term::var(y);
    FormulaPtr heads = Formula::atomic(Term::hd(xv), Rel::EQ, Term::hd(yv));
    FormulaPtr step = substitute(substitute(body, x, Term::tl(xv)), y, Term::tl(yv));
    return Formula::forall(
        x, Sort::S,
        Formula::forall(y, Sort::S,
                        Formula::implies(body, Formula::conj(heads, step))));
}

} // namespace streamlogic
