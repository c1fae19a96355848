#include "streamlogic/formula.hpp"

#include <sstream>

namespace streamlogic {

namespace {
TermPtr mk(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr mkf(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
} // namespace

TermPtr Term::var(std::string name) {
    Term t{TermKind::Var};
    t.name = std::move(name);
    return mk(std::move(t));
}

TermPtr Term::rat_const(Rational q) {
    Term t{TermKind::RatConst};
    t.rat = std::move(q);
    return mk(std::move(t));
}

TermPtr Term::x_const() { return mk(Term{TermKind::XConst}); }

TermPtr Term::stream_const(LaurentRational f) {
    Term t{TermKind::StreamConst};
    t.stream = std::move(f);
    return mk(std::move(t));
}

TermPtr Term::add(TermPtr l, TermPtr r) {
    Term t{TermKind::Add};
    t.a = std::move(l);
    t.b = std::move(r);
    return mk(std::move(t));
}

TermPtr Term::sub(TermPtr l, TermPtr r) {
    Term t{TermKind::Sub};
    t.a = std::move(l);
    t.b = std::move(r);
    return mk(std::move(t));
}

TermPtr Term::mul(TermPtr l, TermPtr r) {
    Term t{TermKind::Mul};
    t.a = std::move(l);
    t.b = std::move(r);
    return mk(std::move(t));
}

TermPtr Term::neg(TermPtr x) {
    Term t{TermKind::Neg};
    t.a = std::move(x);
    return mk(std::move(t));
}

TermPtr Term::hd(TermPtr x) {
    Term t{TermKind::Hd};
    t.a = std::move(x);
    return mk(std::move(t));
}

TermPtr Term::tl(TermPtr x) {
    Term t{TermKind::Tl};
    t.a = std::move(x);
    return mk(std::move(t));
}

TermPtr Term::cons(TermPtr h, TermPtr x) {
    Term t{TermKind::Cons};
    t.a = std::move(h);
    t.b = std::move(x);
    return mk(std::move(t));
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case TermKind::Var: return a->name == b->name;
        case TermKind::RatConst: return a->rat == b->rat;
        case TermKind::XConst: return true;
        case TermKind::StreamConst: return a->stream == b->stream;
        case TermKind::Neg:
        case TermKind::Hd:
        case TermKind::Tl: return term_equal(a->a, b->a);
        default: return term_equal(a->a, b->a) && term_equal(a->b, b->b);
    }
}

namespace {

int term_prec(const Term& t) {
    switch (t.kind) {
        case TermKind::Add:
        case TermKind::Sub: return 1;
        case TermKind::Mul: return 2;
        case TermKind::Neg: return 3;
        default: return 4;
    }
}

void print_term(std::ostringstream& os, const TermPtr& t, int parent_prec) {
    int prec = term_prec(*t);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (t->kind) {
        case TermKind::Var: os << t->name; break;
        case TermKind::RatConst: os << t->rat.get_str(); break;
        case TermKind::XConst: os << "X"; break;
        case TermKind::StreamConst: os << "[[" << t->stream.to_string() << "]]"; break;
        case TermKind::Add:
            print_term(os, t->a, prec);
            os << " + ";
            print_term(os, t->b, prec + 1);
            break;
        case TermKind::Sub:
            print_term(os, t->a, prec);
            os << " - ";
            print_term(os, t->b, prec + 1);
            break;
        case TermKind::Mul:
            print_term(os, t->a, prec);
            os << "*";
            print_term(os, t->b, prec + 1);
            break;
        case TermKind::Neg:
            os << "-";
            print_term(os, t->a, prec + 1);
            break;
        case TermKind::Hd:
            os << "hd(";
            print_term(os, t->a, 0);
            os << ")";
            break;
        case TermKind::Tl:
            os << "tl(";
            print_term(os, t->a, 0);
            os << ")";
            break;
        case TermKind::Cons:
            os << "cons(";
            print_term(os, t->a, 0);
            os << ", ";
            print_term(os, t->b, 0);
            os << ")";
            break;
    }
    if (paren) os << ")";
}

} // namespace

std::string term_to_string(const TermPtr& t) {
    std::ostringstream os;
    print_term(os, t, 0);
    return os.str();
}

FormulaPtr Formula::truth(bool b) { return mkf(Formula{b ? FKind::True : FKind::False}); }

FormulaPtr Formula::atomic(Atom at) {
    Formula f{FKind::Atomic};
    f.atom = std::move(at);
    return mkf(std::move(f));
}

FormulaPtr Formula::atomic(TermPtr lhs, Rel rel, TermPtr rhs) {
    return atomic(Atom{std::move(lhs), rel, std::move(rhs)});
}

FormulaPtr Formula::negation(FormulaPtr x) {
    if (x->kind == FKind::True) return truth(false);
    if (x->kind == FKind::False) return truth(true);
    Formula f{FKind::Not};
    f.a = std::move(x);
    return mkf(std::move(f));
}

FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) {
    if (l->kind == FKind::True) return r;
    if (r->kind == FKind::True) return l;
    if (l->kind == FKind::False || r->kind == FKind::False) return truth(false);
    Formula f{FKind::And};
    f.a = std::move(l);
    f.b = std::move(r);
    return mkf(std::move(f));
}

FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) {
    if (l->kind == FKind::False) return r;
    if (r->kind == FKind::False) return l;
    if (l->kind == FKind::True || r->kind == FKind::True) return truth(true);
    Formula f{FKind::Or};
    f.a = std::move(l);
    f.b = std::move(r);
    return mkf(std::move(f));
}

FormulaPtr Formula::implies(FormulaPtr l, FormulaPtr r) {
    if (l->kind == FKind::False || r->kind == FKind::True) return truth(true);
    if (l->kind == FKind::True) return r;
    Formula f{FKind::Implies};
    f.a = std::move(l);
    f.b = std::move(r);
    return mkf(std::move(f));
}

FormulaPtr Formula::iff(FormulaPtr l, FormulaPtr r) {
    Formula f{FKind::Iff};
    f.a = std::move(l);
    f.b = std::move(r);
    return mkf(std::move(f));
}

FormulaPtr Formula::forall(std::string v, Sort s, FormulaPtr x) {
    Formula f{FKind::Forall};
    f.var = std::move(v);
    f.sort = s;
    f.a = std::move(x);
    return mkf(std::move(f));
}

FormulaPtr Formula::exists(std::string v, Sort s, FormulaPtr x) {
    Formula f{FKind::Exists};
    f.var = std::move(v);
    f.sort = s;
    f.a = std::move(x);
    return mkf(std::move(f));
}

namespace {

// Precedence: iff 1, implies 2, or 3, and 4, not 5.
int form_prec(const Formula& f) {
    switch (f.kind) {
        case FKind::Iff: return 1;
        case FKind::Implies: return 2;
        case FKind::Or: return 3;
        case FKind::And: return 4;
        case FKind::Not: return 5;
        default: return 6;
    }
}

const char* rel_str(Rel r) {
    switch (r) {
        case Rel::EQ: return "=";
        case Rel::LE: return "<=";
        case Rel::LT: return "<";
        case Rel::DIVIDES: return "divides";
    }
    return "?";
}

void print_formula(std::ostringstream& os, const FormulaPtr& f, int parent_prec) {
    if (f->kind == FKind::Forall || f->kind == FKind::Exists) {
        bool paren = parent_prec > 0;
        if (paren) os << "(";
        os << (f->kind == FKind::Forall ? "forall " : "exists ") << f->var << ":"
           << (f->sort == Sort::S ? "S" : "L") << ". ";
        print_formula(os, f->a, 0);
        if (paren) os << ")";
        return;
    }
    int prec = form_prec(*f);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (f->kind) {
        case FKind::True: os << "0 = 0"; break;
        case FKind::False: os << "0 = 1"; break;
        case FKind::Atomic:
            os << term_to_string(f->atom.lhs) << " " << rel_str(f->atom.rel) << " "
               << term_to_string(f->atom.rhs);
            break;
        case FKind::Not:
            os << "~";
            print_formula(os, f->a, prec);
            break;
        case FKind::And:
            print_formula(os, f->a, prec);
            os << " /\\ ";
            print_formula(os, f->b, prec + 1);
            break;
        case FKind::Or:
            print_formula(os, f->a, prec);
            os << " \\/ ";
            print_formula(os, f->b, prec + 1);
            break;
        case FKind::Implies:
            print_formula(os, f->a, prec + 1);
            os << " -> ";
            print_formula(os, f->b, prec);
            break;
        case FKind::Iff:
            print_formula(os, f->a, prec + 1);
            os << " <-> ";
            print_formula(os, f->b, prec + 1);
            break;
        default: break;
    }
    if (paren) os << ")";
}

} // namespace

std::string print(const FormulaPtr& f) {
    std::ostringstream os;
    print_formula(os, f, 0);
    return os.str();
}

} // namespace streamlogic
