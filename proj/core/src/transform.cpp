#include "streamlogic/transform.hpp"

namespace streamlogic {

namespace {

void term_vars_into(const TermPtr& t, std::set<std::string>& out) {
    if (!t) return;
    if (t->kind == TermKind::Var) out.insert(t->name);
    term_vars_into(t->a, out);
    term_vars_into(t->b, out);
}

void free_vars_into(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return;
        case FKind::Atomic: {
            std::set<std::string> vs;
            term_vars_into(f->atom.lhs, vs);
            term_vars_into(f->atom.rhs, vs);
            for (const auto& v : vs)
                if (!bound.count(v)) out.insert(v);
            return;
        }
        case FKind::Not: free_vars_into(f->a, bound, out); return;
        case FKind::Forall:
        case FKind::Exists: {
            bool was = bound.count(f->var) > 0;
            bound.insert(f->var);
            free_vars_into(f->a, bound, out);
            if (!was) bound.erase(f->var);
            return;
        }
        default:
            free_vars_into(f->a, bound, out);
            free_vars_into(f->b, bound, out);
            return;
    }
}

} // namespace

std::set<std::string> term_vars(const TermPtr& t) {
    std::set<std::string> vs;
    term_vars_into(t, vs);
    return vs;
}

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> bound, out;
    free_vars_into(f, bound, out);
    return out;
}

namespace {
void all_vars_into(const FormulaPtr& f, std::set<std::string>& out) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return;
        case FKind::Atomic:
            term_vars_into(f->atom.lhs, out);
            term_vars_into(f->atom.rhs, out);
            return;
        case FKind::Not: all_vars_into(f->a, out); return;
        case FKind::Forall:
        case FKind::Exists:
            out.insert(f->var);
            all_vars_into(f->a, out);
            return;
        default:
            all_vars_into(f->a, out);
            all_vars_into(f->b, out);
            return;
    }
}
} // namespace

std::set<std::string> all_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    all_vars_into(f, out);
    return out;
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    std::string name = base;
    while (used.count(name)) name += "'";
    used.insert(name);
    return name;
}

TermPtr substitute_term(const TermPtr& t, const std::string& var, const TermPtr& repl) {
    if (!t) return t;
    switch (t->kind) {
        case TermKind::Var: return t->name == var ? repl : t;
        case TermKind::RatConst:
        case TermKind::XConst:
        case TermKind::StreamConst: return t;
        default: {
            TermPtr a = substitute_term(t->a, var, repl);
            TermPtr b = substitute_term(t->b, var, repl);
            if (a == t->a && b == t->b) return t;
            Term n = *t;
            n.a = a;
            n.b = b;
            return std::make_shared<const Term>(std::move(n));
        }
    }
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const TermPtr& repl) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atomic:
            return Formula::atomic(substitute_term(f->atom.lhs, var, repl), f->atom.rel,
                                   substitute_term(f->atom.rhs, var, repl));
        case FKind::Not: return Formula::negation(substitute(f->a, var, repl));
        case FKind::And: return Formula::conj(substitute(f->a, var, repl), substitute(f->b, var, repl));
        case FKind::Or: return Formula::disj(substitute(f->a, var, repl), substitute(f->b, var, repl));
        case FKind::Implies:
            return Formula::implies(substitute(f->a, var, repl), substitute(f->b, var, repl));
        case FKind::Iff: return Formula::iff(substitute(f->a, var, repl), substitute(f->b, var, repl));
        case FKind::Forall:
        case FKind::Exists: {
            if (f->var == var) return f;
            std::set<std::string> rv = term_vars(repl);
            std::string bound = f->var;
            FormulaPtr body = f->a;
            if (rv.count(bound)) {
                std::set<std::string> used = all_vars(f->a);
                used.insert(rv.begin(), rv.end());
                used.insert(var);
                std::string nb = fresh_name(bound, used);
                body = substitute(body, bound, Term::var(nb));
                bound = nb;
            }
            body = substitute(body, var, repl);
            return f->kind == FKind::Forall ? Formula::forall(bound, f->sort, body)
                                           : Formula::exists(bound, f->sort, body);
        }
    }
    return f;
}

namespace {

FormulaPtr alpha_walk(const FormulaPtr& f, std::set<std::string>& used) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False:
        case FKind::Atomic: return f;
        case FKind::Not: return Formula::negation(alpha_walk(f->a, used));
        case FKind::And: return Formula::conj(alpha_walk(f->a, used), alpha_walk(f->b, used));
        case FKind::Or: return Formula::disj(alpha_walk(f->a, used), alpha_walk(f->b, used));
        case FKind::Implies: return Formula::implies(alpha_walk(f->a, used), alpha_walk(f->b, used));
        case FKind::Iff: return Formula::iff(alpha_walk(f->a, used), alpha_walk(f->b, used));
        case FKind::Forall:
        case FKind::Exists: {
            std::string name = f->var;
            FormulaPtr body = f->a;
            if (used.count(name)) {
                std::string nb = fresh_name(name, used);
                body = substitute(body, name, Term::var(nb));
                name = nb;
            } else {
                used.insert(name);
            }
            body = alpha_walk(body, used);
            return f->kind == FKind::Forall ? Formula::forall(name, f->sort, body)
                                            : Formula::exists(name, f->sort, body);
        }
    }
    return f;
}

} // namespace

FormulaPtr alpha_rename(const FormulaPtr& f) {
    std::set<std::string> used = free_vars(f);
    return alpha_walk(f, used);
}

FormulaPtr desugar_iff(const FormulaPtr& f) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False:
        case FKind::Atomic: return f;
        case FKind::Not: return Formula::negation(desugar_iff(f->a));
        case FKind::And: return Formula::conj(desugar_iff(f->a), desugar_iff(f->b));
        case FKind::Or: return Formula::disj(desugar_iff(f->a), desugar_iff(f->b));
        case FKind::Implies: return Formula::implies(desugar_iff(f->a), desugar_iff(f->b));
        case FKind::Iff: {
            FormulaPtr a = desugar_iff(f->a), b = desugar_iff(f->b);
            return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
        }
        case FKind::Forall: return Formula::forall(f->var, f->sort, desugar_iff(f->a));
        case FKind::Exists: return Formula::exists(f->var, f->sort, desugar_iff(f->a));
    }
    return f;
}

namespace {

bool is_quant(const FormulaPtr& f) { return f->kind == FKind::Forall || f->kind == FKind::Exists; }

FormulaPtr requant(FKind k, const std::string& v, Sort s, FormulaPtr body) {
    return k == FKind::Forall ? Formula::forall(v, s, std::move(body))
                              : Formula::exists(v, s, std::move(body));
}

FKind dual(FKind k) { return k == FKind::Forall ? FKind::Exists : FKind::Forall; }

FormulaPtr prenex_walk(const FormulaPtr& f, std::set<std::string>& used);

// Pull quantifiers of already-prenex l and r above op. flip_left applies to
// the antecedent of an implication.
FormulaPtr pull(FKind op, FormulaPtr l, FormulaPtr r, std::set<std::string>& used) {
    if (is_quant(l)) {
        std::string v = fresh_name(l->var, used);
        FormulaPtr body = v == l->var ? l->a : substitute(l->a, l->var, Term::var(v));
        FKind k = op == FKind::Implies ? dual(l->kind) : l->kind;
        return requant(k, v, l->sort, pull(op, body, std::move(r), used));
    }
    if (is_quant(r)) {
        std::string v = fresh_name(r->var, used);
        FormulaPtr body = v == r->var ? r->a : substitute(r->a, r->var, Term::var(v));
        return requant(r->kind, v, r->sort, pull(op, std::move(l), body, used));
    }
    switch (op) {
        case FKind::And: return Formula::conj(std::move(l), std::move(r));
        case FKind::Or: return Formula::disj(std::move(l), std::move(r));
        default: return Formula::implies(std::move(l), std::move(r));
    }
}

FormulaPtr prenex_walk(const FormulaPtr& f, std::set<std::string>& used) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False:
        case FKind::Atomic: return f;
        case FKind::Not: {
            FormulaPtr p = prenex_walk(f->a, used);
            // ~Qx phi  ->  dual(Q)x ~phi
            std::vector<const Formula*> prefix;
            const Formula* cur = p.get();
            while (cur->kind == FKind::Forall || cur->kind == FKind::Exists) {
                prefix.push_back(cur);
                cur = cur->a.get();
            }
            FormulaPtr body = Formula::negation(cur == p.get() ? p : FormulaPtr(p, cur));
            for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
                body = requant(dual((*it)->kind), (*it)->var, (*it)->sort, body);
            return body;
        }
        case FKind::And:
        case FKind::Or:
        case FKind::Implies: {
            FormulaPtr l = prenex_walk(f->a, used);
            FormulaPtr r = prenex_walk(f->b, used);
            return pull(f->kind, std::move(l), std::move(r), used);
        }
        case FKind::Iff:
            return prenex_walk(desugar_iff(f), used);
        case FKind::Forall:
        case FKind::Exists: {
            FormulaPtr body = prenex_walk(f->a, used);
            return requant(f->kind, f->var, f->sort, body);
        }
    }
    return f;
}

} // namespace

FormulaPtr prenex(const FormulaPtr& f) {
    FormulaPtr renamed = alpha_rename(f);
    std::set<std::string> used = all_vars(renamed);
    return prenex_walk(renamed, used);
}

} // namespace streamlogic
