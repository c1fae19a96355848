#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <vector>

#include "random_gen.hpp"
#include "rcf_oracle.hpp"
#include "streamlogic/errors.hpp"
#include "streamlogic/parser.hpp"
#include "streamlogic/qe.hpp"
#include "streamlogic/transform.hpp"

using namespace streamlogic;
using rcf_oracle::BExpr;
using rcf_oracle::LinForm;
using rcf_oracle::Lit1;
using rcf_oracle::Lit2;

namespace {

TermPtr rat_term(const Rational& q) { return Term::rat_const(q); }

TermPtr poly_term(const UniPoly& p, const TermPtr& v) {
    if (p.is_zero()) return rat_term(Rational(0));
    TermPtr acc = rat_term(p.lead());
    for (int i = p.degree() - 1; i >= 0; --i)
        acc = Term::add(Term::mul(acc, v), rat_term(p.coeff(i)));
    return acc;
}

FormulaPtr atom_f(const TermPtr& t, Rel rel) {
    return Formula::atomic(t, rel, rat_term(Rational(0)));
}

FormulaPtr render_bexpr(const BExpr& e, const std::vector<FormulaPtr>& lits) {
    switch (e.kind) {
    case BExpr::Lit: return lits.at(static_cast<size_t>(e.lit));
    case BExpr::Not: return Formula::negation(render_bexpr(*e.a, lits));
    case BExpr::And: return Formula::conj(render_bexpr(*e.a, lits), render_bexpr(*e.b, lits));
    case BExpr::Or: return Formula::disj(render_bexpr(*e.a, lits), render_bexpr(*e.b, lits));
    }
    return nullptr;
}

Rel rand_rel(testgen::Rng& rng) {
    switch (rng() % 3) {
    case 0: return Rel::EQ;
    case 1: return Rel::LE;
    default: return Rel::LT;
    }
}

std::shared_ptr<BExpr> rand_bexpr(testgen::Rng& rng, int nlits) {
    std::vector<std::shared_ptr<BExpr>> leaves;
    for (int i = 0; i < nlits; ++i) {
        auto l = BExpr::mk_lit(i);
        if (rng() % 4 == 0) l = BExpr::mk_not(l);
        leaves.push_back(l);
    }
    while (leaves.size() > 1) {
        auto b = leaves.back();
        leaves.pop_back();
        auto a = leaves.back();
        leaves.pop_back();
        leaves.push_back(rng() % 2 ? BExpr::mk_and(a, b) : BExpr::mk_or(a, b));
    }
    return leaves.front();
}

Rational small_int(testgen::Rng& rng) {
    return Rational(static_cast<long>(rng() % 9) - 4);
}

UniPoly rand_quadratic(testgen::Rng& rng) {
    for (;;) {
        std::vector<Rational> cs{small_int(rng), small_int(rng), small_int(rng)};
        UniPoly p(cs);
        if (p.degree() >= 1) return p;
    }
}

LinForm rand_form(testgen::Rng& rng) {
    for (;;) {
        LinForm f{small_int(rng), small_int(rng), small_int(rng)};
        if (f.a != 0 || f.b != 0) return f;
    }
}

bool closed_qf_truth(FormulaPtr qf) { return evaluate_qf(qf); }

QeOptions big_budget() {
    QeOptions o;
    o.budget = 50'000'000;
    return o;
}

} // namespace

TEST_CASE("one-quantifier sentences agree with the algebraic-sample oracle") {
    testgen::Rng rng(401);
    int agree = 0;
    const int total = 40;
    for (int t = 0; t < total; ++t) {
        int nl = 2 + static_cast<int>(rng() % 3);
        std::vector<Lit1> lits;
        std::vector<FormulaPtr> atoms;
        TermPtr x = Term::var("x");
        for (int i = 0; i < nl; ++i) {
            Lit1 l{rand_quadratic(rng), rand_rel(rng)};
            lits.push_back(l);
            atoms.push_back(atom_f(poly_term(l.p, x), l.rel));
        }
        auto body = rand_bexpr(rng, nl);
        bool exists = rng() % 2 == 0;
        FormulaPtr matrix = render_bexpr(*body, atoms);
        FormulaPtr f = exists ? Formula::exists("x", Sort::L, matrix)
                              : Formula::forall("x", Sort::L, matrix);

        bool want = rcf_oracle::decide_1q(exists, lits, *body);
        bool got = closed_qf_truth(eliminate(f, big_budget()));
        if (want == got) ++agree;
        CHECK_MESSAGE(want == got, print(f));
    }
    CHECK(agree == total);
}

TEST_CASE("two-quantifier sentences over line arrangements agree with the oracle") {
    testgen::Rng rng(402);
    int agree = 0;
    const int total = 40;
    for (int t = 0; t < total; ++t) {
        int nl = 2 + static_cast<int>(rng() % 2);
        std::vector<Lit2> lits;
        std::vector<FormulaPtr> atoms;
        TermPtr x = Term::var("x"), y = Term::var("y");
        for (int i = 0; i < nl; ++i) {
            Lit2 l;
            int nf = 1 + static_cast<int>(rng() % 2);
            TermPtr prod;
            for (int k = 0; k < nf; ++k) {
                LinForm f = rand_form(rng);
                l.factors.push_back(f);
                TermPtr ft = Term::add(
                    Term::add(Term::mul(rat_term(f.a), x), Term::mul(rat_term(f.b), y)),
                    rat_term(f.c));
                prod = prod ? Term::mul(prod, ft) : ft;
            }
            l.rel = rand_rel(rng);
            lits.push_back(l);
            atoms.push_back(atom_f(prod, l.rel));
        }
        auto body = rand_bexpr(rng, nl);
        bool q1 = rng() % 2 == 0, q2 = rng() % 2 == 0;
        FormulaPtr matrix = render_bexpr(*body, atoms);
        FormulaPtr inner = q2 ? Formula::exists("y", Sort::L, matrix)
                              : Formula::forall("y", Sort::L, matrix);
        FormulaPtr f = q1 ? Formula::exists("x", Sort::L, inner)
                          : Formula::forall("x", Sort::L, inner);

        bool want = rcf_oracle::decide_2q(q1, q2, lits, *body);
        bool got = closed_qf_truth(eliminate(f, big_budget()));
        if (want == got) ++agree;
        CHECK_MESSAGE(want == got, print(f));
    }
    CHECK(agree == total);
}

TEST_CASE("parametric elimination agrees with the oracle after instantiation") {
    // Three-variable inputs: quantify x and y, leave z free, then compare the
    // eliminated formula at rational values of z against the oracle on the
    // instantiated sentence.
    testgen::Rng rng(403);
    int agree = 0;
    const int total = 20;
    for (int t = 0; t < total; ++t) {
        int nl = 2;
        TermPtr x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
        std::vector<std::pair<LinForm, Rational>> forms; // form + z coefficient
        std::vector<Rel> rels;
        std::vector<FormulaPtr> atoms;
        for (int i = 0; i < nl; ++i) {
            LinForm f = rand_form(rng);
            Rational d = small_int(rng);
            Rel rel = rand_rel(rng);
            forms.push_back({f, d});
            rels.push_back(rel);
            TermPtr ft = Term::add(
                Term::add(Term::add(Term::mul(rat_term(f.a), x), Term::mul(rat_term(f.b), y)),
                          Term::mul(rat_term(d), z)),
                rat_term(f.c));
            atoms.push_back(atom_f(ft, rel));
        }
        auto body = rand_bexpr(rng, nl);
        bool q1 = rng() % 2 == 0, q2 = rng() % 2 == 0;
        FormulaPtr matrix = render_bexpr(*body, atoms);
        FormulaPtr inner = q2 ? Formula::exists("y", Sort::L, matrix)
                              : Formula::forall("y", Sort::L, matrix);
        FormulaPtr f = q1 ? Formula::exists("x", Sort::L, inner)
                          : Formula::forall("x", Sort::L, inner);
        FormulaPtr qf = eliminate(f, big_budget());
        CHECK(free_vars(qf) == std::set<std::string>{"z"});

        bool all = true;
        for (int s = 0; s < 3; ++s) {
            Rational z0 = testgen::rat(rng, 4);
            std::vector<Lit2> lits;
            for (int i = 0; i < nl; ++i) {
                LinForm g = forms[i].first;
                g.c += forms[i].second * z0;
                lits.push_back(Lit2{{g}, rels[i]});
            }
            bool want = rcf_oracle::decide_2q(q1, q2, lits, *body);
            bool got = closed_qf_truth(substitute(qf, "z", rat_term(z0)));
            if (want != got) all = false;
            CHECK_MESSAGE(want == got, print(f) << " at z=" << to_string(z0));
        }
        if (all) ++agree;
    }
    CHECK(agree == total);
}

TEST_CASE("existence of a quadratic root eliminates to the discriminant condition") {
    FormulaPtr f = parse_formula("exists x : L . x * x + b * x + c = 0");
    FormulaPtr qf = eliminate(f);
    CHECK(free_vars(qf) == std::set<std::string>{"b", "c"});
    testgen::Rng rng(404);
    for (int i = 0; i < 50; ++i) {
        Rational b0 = testgen::rat(rng, 8), c0 = testgen::rat(rng, 8);
        bool got = evaluate_qf(
            substitute(substitute(qf, "b", rat_term(b0)), "c", rat_term(c0)));
        bool want = b0 * b0 - Rational(4) * c0 >= 0;
        CHECK_MESSAGE(got == want, "b=" << to_string(b0) << " c=" << to_string(c0));
    }
}

TEST_CASE("elimination is idempotent on quantifier-free input") {
    testgen::Rng rng(405);
    for (const char* s : {"x * x <= 1 /\\ ~(x = 0)", "b * b < 4 * c \\/ b = 0",
                          "x + y < 1 -> x < 1 \\/ y < 1"}) {
        FormulaPtr f = parse_formula(s);
        FormulaPtr qf = eliminate(f);
        std::function<bool(const FormulaPtr&)> has_q = [&](const FormulaPtr& h) -> bool {
            if (!h) return false;
            if (h->kind == FKind::Forall || h->kind == FKind::Exists) return true;
            return has_q(h->a) || has_q(h->b);
        };
        CHECK(!has_q(qf));
        // Same truth at sampled rational points.
        for (int i = 0; i < 30; ++i) {
            FormulaPtr a = f, b = qf;
            for (const auto& v : free_vars(f)) {
                Rational r = testgen::rat(rng, 6);
                a = substitute(a, v, rat_term(r));
                b = substitute(b, v, rat_term(r));
            }
            CHECK(evaluate_qf(a) == evaluate_qf(b));
        }
    }
}

TEST_CASE("infinitesimal sign matches evaluation at small dyadic points") {
    testgen::Rng rng(406);
    for (int i = 0; i < 200; ++i) {
        UniPoly p = testgen::unipoly(rng, 8);
        Sign s = sign_at_infinitesimal(p);
        if (p.is_zero()) {
            CHECK(s == Sign::ZERO);
            continue;
        }
        // Past stabilization the sign at 2^-k is constant and equals s.
        Rational eps(1);
        for (int k = 0; k < 40; ++k) eps /= 2;
        for (int k = 40; k < 45; ++k, eps /= 2) CHECK(sign_of(p.eval(eps)) == s);
    }
}

TEST_CASE("infinitesimal comparisons decide correctly") {
    QeOptions inf;
    inf.infinitesimal = true;
    CHECK(evaluate_qf(parse_formula("X < 1")));
    CHECK(evaluate_qf(parse_formula("0 < X")));
    CHECK(evaluate_qf(parse_formula("X * X < X")));
    CHECK(!evaluate_qf(parse_formula("X = 0")));
    CHECK(!evaluate_qf(parse_formula("1 <= X")));
}

TEST_CASE("same input and budget give identical statistics") {
    FormulaPtr f = parse_formula(
        "forall x : L . exists y : L . x < y /\\ (x * x <= y \\/ y < 0)");
    QeOptions opts;
    opts.budget = 1'000'000;
    QeStats s1, s2;
    FormulaPtr r1 = eliminate(f, opts, &s1);
    FormulaPtr r2 = eliminate(f, opts, &s2);
    CHECK(print(r1) == print(r2));
    CHECK(s1.splits == s2.splits);
    CHECK(s1.remainders == s2.remainders);
    CHECK(s1.disjuncts == s2.disjuncts);
    CHECK(s1.presolved == s2.presolved);
}

TEST_CASE("tiny budgets fail fast with BUDGET_EXCEEDED") {
    FormulaPtr f = parse_formula(
        "forall a : L . forall b : L . exists x : L . x * x * x + a * x + b = 0");
    QeOptions opts;
    opts.budget = 10;
    opts.presolve = false;
    try {
        (void)eliminate(f, opts);
        FAIL_CHECK("expected BUDGET_EXCEEDED");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BUDGET_EXCEEDED);
    }
}

TEST_CASE("decide handles full stream sentences end to end") {
    Decision d = decide(parse_formula("forall x : S . 0 <= x \\/ x <= 0"));
    CHECK(d.valid);
    Decision bad = decide(parse_formula("forall x : S . 0 <= x"));
    CHECK(!bad.valid);
    Decision inv = decide(parse_formula("forall x : L . x = 0 \\/ exists y : L . x * y = 1"));
    CHECK(inv.valid);
    Decision invs = decide(parse_formula("forall x : S . x = 0 \\/ exists y : S . x * y = 1"));
    CHECK(!invs.valid);
}
