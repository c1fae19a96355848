// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. CLI-facing criteria shell out to the installed tool binary; the
// rest call the library directly.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "random_gen.hpp"
#include "rcf_oracle.hpp"
#include "streamlogic/circuits.hpp"
#include "streamlogic/errors.hpp"
#include "streamlogic/laurent.hpp"
#include "streamlogic/parser.hpp"
#include "streamlogic/qe.hpp"
#include "streamlogic/transform.hpp"
#include "streamlogic/trunc_series.hpp"

using namespace streamlogic;

namespace {

int failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    std::string cmd = std::string(SLOG_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    while (size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

void report(int idx, const std::string& what, bool ok, double secs, double limit) {
    bool pass = ok && secs <= limit;
    if (!pass) ++failures;
    std::printf("%s: criterion %2d (%s) [%.2fs]\n", pass ? "PASS" : "FAIL", idx, what.c_str(),
                secs);
}

void criterion(int idx, const std::string& what, double limit, const std::function<bool()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion %d threw: %s\n", idx, e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(idx, what, ok, secs, limit);
}

bool decide_file(const std::string& name, bool want_valid, const std::string& extra = "") {
    RunResult r = run("decide " + corpus(name) + extra);
    if (want_valid) return r.exit_code == 0 && trimmed(r.out) == "VALID";
    return r.exit_code == 1 && trimmed(r.out) == "INVALID";
}

// --- criterion 7 helpers: random sentences mirrored into the oracle -------

using rcf_oracle::BExpr;
using rcf_oracle::LinForm;
using rcf_oracle::Lit1;
using rcf_oracle::Lit2;

TermPtr rat_term(const Rational& q) { return Term::rat_const(q); }

TermPtr poly_term(const UniPoly& p, const TermPtr& v) {
    if (p.is_zero()) return rat_term(Rational(0));
    TermPtr acc = rat_term(p.lead());
    for (int i = p.degree() - 1; i >= 0; --i)
        acc = Term::add(Term::mul(acc, v), rat_term(p.coeff(i)));
    return acc;
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

Rational small_int(testgen::Rng& rng) { return Rational(static_cast<long>(rng() % 9) - 4); }

UniPoly rand_quadratic(testgen::Rng& rng) {
    for (;;) {
        UniPoly p(std::vector<Rational>{small_int(rng), small_int(rng), small_int(rng)});
        if (p.degree() >= 1) return p;
    }
}

LinForm rand_form(testgen::Rng& rng) {
    for (;;) {
        LinForm f{small_int(rng), small_int(rng), small_int(rng)};
        if (f.a != 0 || f.b != 0) return f;
    }
}

QeOptions big_budget() {
    QeOptions o;
    o.budget = 50'000'000;
    return o;
}

bool differential_1q(testgen::Rng& rng) {
    int nl = 2 + static_cast<int>(rng() % 3);
    std::vector<Lit1> lits;
    std::vector<FormulaPtr> atoms;
    TermPtr x = Term::var("x");
    for (int i = 0; i < nl; ++i) {
        Lit1 l{rand_quadratic(rng), rand_rel(rng)};
        lits.push_back(l);
        atoms.push_back(Formula::atomic(poly_term(l.p, x), l.rel, rat_term(Rational(0))));
    }
    auto body = rand_bexpr(rng, nl);
    bool ex = rng() % 2 == 0;
    FormulaPtr matrix = render_bexpr(*body, atoms);
    FormulaPtr f = ex ? Formula::exists("x", Sort::L, matrix)
                      : Formula::forall("x", Sort::L, matrix);
    return rcf_oracle::decide_1q(ex, lits, *body) == evaluate_qf(eliminate(f, big_budget()));
}

bool differential_2q(testgen::Rng& rng) {
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
            TermPtr ft =
                Term::add(Term::add(Term::mul(rat_term(f.a), x), Term::mul(rat_term(f.b), y)),
                          rat_term(f.c));
            prod = prod ? Term::mul(prod, ft) : ft;
        }
        l.rel = rand_rel(rng);
        lits.push_back(l);
        atoms.push_back(Formula::atomic(prod, l.rel, rat_term(Rational(0))));
    }
    auto body = rand_bexpr(rng, nl);
    bool q1 = rng() % 2 == 0, q2 = rng() % 2 == 0;
    FormulaPtr matrix = render_bexpr(*body, atoms);
    FormulaPtr inner =
        q2 ? Formula::exists("y", Sort::L, matrix) : Formula::forall("y", Sort::L, matrix);
    FormulaPtr f =
        q1 ? Formula::exists("x", Sort::L, inner) : Formula::forall("x", Sort::L, inner);
    return rcf_oracle::decide_2q(q1, q2, lits, *body) == evaluate_qf(eliminate(f, big_budget()));
}

bool differential_3var(testgen::Rng& rng) {
    // Two quantified variables plus a free one, instantiated at a rational.
    TermPtr x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
    int nl = 2;
    std::vector<std::pair<LinForm, Rational>> forms;
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
        atoms.push_back(Formula::atomic(ft, rel, rat_term(Rational(0))));
    }
    auto body = rand_bexpr(rng, nl);
    bool q1 = rng() % 2 == 0, q2 = rng() % 2 == 0;
    FormulaPtr matrix = render_bexpr(*body, atoms);
    FormulaPtr inner =
        q2 ? Formula::exists("y", Sort::L, matrix) : Formula::forall("y", Sort::L, matrix);
    FormulaPtr f =
        q1 ? Formula::exists("x", Sort::L, inner) : Formula::forall("x", Sort::L, inner);
    FormulaPtr qf = eliminate(f, big_budget());
    Rational z0 = testgen::rat(rng, 4);
    std::vector<Lit2> lits;
    for (int i = 0; i < nl; ++i) {
        LinForm g = forms[i].first;
        g.c += forms[i].second * z0;
        lits.push_back(Lit2{{g}, rels[i]});
    }
    bool want = rcf_oracle::decide_2q(q1, q2, lits, *body);
    bool got = evaluate_qf(substitute(qf, "z", rat_term(z0)));
    return want == got;
}

} // namespace

int main() {
    criterion(1, "fibonacci coefficients via the expansion command", 1.0, [] {
        RunResult r = run("coeffs \"X/(1-X-X^2)\" --count 7");
        return r.exit_code == 0 && trimmed(r.out) == "0 1 1 2 3 5 8";
    });

    criterion(2, "geometric-family expansions", 1.0, [] {
        RunResult a = run("coeffs \"1/(1-X)\" --count 5");
        RunResult b = run("coeffs \"1/(1-X)^2\" --count 4");
        RunResult c = run("coeffs \"1/(1-3*X)\" --count 4");
        return a.exit_code == 0 && trimmed(a.out) == "1 1 1 1 1" && b.exit_code == 0 &&
               trimmed(b.out) == "1 2 3 4" && c.exit_code == 0 && trimmed(c.out) == "1 3 9 27";
    });

    criterion(3, "catalan numbers against the fixpoint oracle", 1.0, [] {
        RunResult r = run("coeffs catalan --count 8");
        if (r.exit_code != 0 || trimmed(r.out) != "1 1 2 5 14 42 132 429") return false;
        // Oracle: iterate f <- 1 + X*f^2; indices past 4 must already agree.
        std::vector<Rational> f(8, Rational(0));
        for (int it = 0; it < 10; ++it) {
            std::vector<Rational> next(8, Rational(0));
            next[0] = 1;
            for (int i = 0; i + 1 < 8; ++i) {
                Rational conv(0);
                for (int j = 0; j <= i; ++j) conv += f[j] * f[i - j];
                next[i + 1] = conv;
            }
            f = next;
        }
        TruncSeries c = catalan_check(8);
        for (int i = 0; i < 8; ++i)
            if (c.at(i) != f[i]) return false;
        return true;
    });

    criterion(4, "square-root prefixes round-trip on 100 random squares", 30.0, [] {
        testgen::Rng rng(904);
        const int n = 20;
        for (int t = 0; t < 100; ++t) {
            std::vector<Rational> cs;
            Rational head = testgen::nonzero_rat(rng, 6);
            cs.push_back(head * head);
            for (int k = 1; k < n; ++k) cs.push_back(testgen::rat(rng, 6));
            TruncSeries g(0, cs);
            TruncSeries back = sqrt_prefix(g.mul(g), n);
            for (int k = 0; k < n; ++k)
                if (back.at(k) != g.at(k)) return false;
        }
        return true;
    });

    criterion(5, "circuit transfer, analysis, and synthesis claims", 10.0, [] {
        RunResult t = run("circuit " + corpus("fig1.sc") + " --transfer y --input z");
        if (t.exit_code != 0 || trimmed(t.out) != "1/(1 - X)") return false;
        return decide_file("analysis.slog", true) && decide_file("synthesis.slog", true);
    });

    criterion(6, "stream-calculus axiom corpus over both sorts", 60.0, [] {
        const char* axioms[] = {
            "axiom_01_distrib.slog",     "axiom_02_add_assoc.slog",
            "axiom_03_mul_assoc.slog",   "axiom_04_add_comm.slog",
            "axiom_05_mul_comm.slog",    "axiom_06_add_unit.slog",
            "axiom_07_add_inverse.slog", "axiom_08_mul_unit.slog",
            "axiom_09_mul_inverse.slog", "axiom_10_refl.slog",
            "axiom_11_trans.slog",       "axiom_12_antisym.slog",
            "axiom_13_total.slog",       "axiom_14_mono_add.slog",
            "axiom_15_pos_mul.slog",     "axiom_16_sqrt.slog",
            "axiom_17_odd_root.slog",
        };
        for (const char* a : axioms)
            if (!decide_file(a, true)) return false;
        return decide_file("axiom_09_mul_inverse_S.slog", false);
    });

    criterion(7, "elimination agrees with the root-isolation oracle on 100 sentences", 300.0,
              [] {
                  testgen::Rng rng(907);
                  for (int t = 0; t < 40; ++t)
                      if (!differential_1q(rng)) return false;
                  for (int t = 0; t < 40; ++t)
                      if (!differential_2q(rng)) return false;
                  for (int t = 0; t < 20; ++t)
                      if (!differential_3var(rng)) return false;
                  return true;
              });

    criterion(8, "order facts about the infinitesimal constant", 6.0, [] {
        return decide_file("order_pos.slog", true) && decide_file("order_lt_one.slog", true) &&
               decide_file("order_lt_tenth.slog", true) &&
               decide_file("order_lt_millionth.slog", true) &&
               decide_file("order_square.slog", true) &&
               decide_file("order_not_zero.slog", false);
    });

    criterion(9, "ultrametric and valuation laws on 1000 random pairs", 30.0, [] {
        testgen::Rng rng(909);
        for (int t = 0; t < 1000; ++t) {
            LaurentRational a = testgen::laurent(rng);
            LaurentRational b = testgen::laurent(rng);
            LaurentRational c = testgen::laurent(rng);
            Rational dab = metric_d(a, b);
            if (dab < 0) return false;
            if ((dab == 0) != (a == b)) return false;
            if (dab != metric_d(b, a)) return false;
            if (metric_d(a, c) > std::max(dab, metric_d(b, c))) return false;
            Valuation va = a.valuation(), vb = b.valuation(), vp = (a * b).valuation();
            if (va.finite && vb.finite) {
                if (!(vp == Valuation::of(va.value + vb.value))) return false;
            } else if (vp.finite) {
                return false;
            }
        }
        return true;
    });

    criterion(10, "behavioral characterization of the fibonacci stream", 30.0, [] {
        return decide_file("fib_behavioral.slog", true) &&
               decide_file("fib_behavioral_wrong.slog", false);
    });

    criterion(11, "coinduction steps for stream relations", 30.0, [] {
        RunResult eq = run("bisim " + corpus("bisim_eq.slog"));
        RunResult off = run("bisim " + corpus("bisim_plus_one.slog"));
        return eq.exit_code == 0 && trimmed(eq.out) == "VALID" && off.exit_code == 1 &&
               trimmed(off.out) == "INVALID";
    });

    criterion(12, "deterministic statistics and prompt budget failures", 10.0, [] {
        FormulaPtr f = parse_formula(
            "forall x : L . exists y : L . x < y /\\ (x * x <= y \\/ y < 0)");
        QeOptions opts;
        opts.budget = 1'000'000;
        QeStats s1, s2;
        FormulaPtr r1 = eliminate(f, opts, &s1);
        FormulaPtr r2 = eliminate(f, opts, &s2);
        if (print(r1) != print(r2) || s1.splits != s2.splits ||
            s1.remainders != s2.remainders || s1.disjuncts != s2.disjuncts)
            return false;
        QeOptions tiny;
        tiny.budget = 10;
        tiny.presolve = false;
        try {
            (void)eliminate(parse_formula(
                          "forall a : L . forall b : L . exists x : L . "
                          "x * x * x + a * x + b = 0"),
                      tiny);
            return false;
        } catch (const Error& e) {
            return e.code() == ErrorCode::BUDGET_EXCEEDED;
        }
    });

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 12 criteria passed\n");
    return 0;
}
