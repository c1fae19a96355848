#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "random_gen.hpp"
#include "streamlogic/errors.hpp"
#include "streamlogic/multipoly.hpp"
#include "streamlogic/unipoly.hpp"

using namespace streamlogic;

TEST_CASE("unipoly normal form drops leading zeros") {
    UniPoly p({Rational(1), Rational(2), Rational(0)});
    CHECK(p.degree() == 1);
    CHECK(p.coeff(1) == 2);
    CHECK(UniPoly(std::vector<Rational>{Rational(0)}).is_zero());
}

TEST_CASE("unipoly arithmetic basics") {
    UniPoly x = UniPoly::x();
    UniPoly p = x * x - UniPoly(Rational(1)); // X^2 - 1
    CHECK(p.eval(Rational(3)) == 8);
    CHECK(p.derivative() == x.scaled(Rational(2)));
    CHECK(p.low_degree() == 0);
    CHECK((x * x).low_degree() == 2);
    CHECK(p.shifted(2) == x * x * x * x - x * x);
}

TEST_CASE("unipoly divmod reconstructs the dividend") {
    testgen::Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        UniPoly a = testgen::unipoly(rng, 6);
        UniPoly b = testgen::nonzero_unipoly(rng, 4);
        auto [q, r] = UniPoly::divmod(a, b);
        CHECK(q * b + r == a);
        CHECK((r.is_zero() || r.degree() < b.degree()));
    }
}

TEST_CASE("unipoly gcd divides both inputs and is monic") {
    testgen::Rng rng(102);
    for (int i = 0; i < 100; ++i) {
        UniPoly a = testgen::nonzero_unipoly(rng, 5);
        UniPoly b = testgen::nonzero_unipoly(rng, 5);
        UniPoly g = UniPoly::gcd(a, b);
        CHECK(g.lead() == 1);
        CHECK(UniPoly::divmod(a, g).second.is_zero());
        CHECK(UniPoly::divmod(b, g).second.is_zero());
    }
}

TEST_CASE("square-free part keeps exactly the distinct roots") {
    UniPoly x = UniPoly::x();
    UniPoly p = (x - UniPoly(Rational(1))) * (x - UniPoly(Rational(1))) * (x + UniPoly(Rational(2)));
    UniPoly sf = p.square_free_part();
    CHECK(sf.degree() == 2);
    CHECK(sf.eval(Rational(1)) == 0);
    CHECK(sf.eval(Rational(-2)) == 0);
}

TEST_CASE("sturm count finds the right number of roots") {
    UniPoly x = UniPoly::x();
    UniPoly p = x * x - UniPoly(Rational(2)); // roots +-sqrt(2)
    CHECK(sturm_count(p, Rational(-10), Rational(10)) == 2);
    CHECK(sturm_count(p, Rational(0), Rational(10)) == 1);
    CHECK(sturm_count(p, Rational(2), Rational(10)) == 0);
    CHECK_THROWS_AS((void)sturm_count(x, Rational(0), Rational(1)), Error);
}

TEST_CASE("isolated roots are disjoint, sorted, and within the root bound") {
    testgen::Rng rng(103);
    for (int i = 0; i < 100; ++i) {
        UniPoly p = testgen::nonzero_unipoly(rng, 5);
        if (p.degree() < 1) continue;
        Rational bound = root_bound(p);
        auto roots = isolate_roots(p);
        for (size_t k = 0; k < roots.size(); ++k) {
            auto [lo, hi] = roots[k];
            CHECK(lo < hi);
            CHECK(-bound <= lo);
            CHECK(hi <= bound);
            CHECK(sturm_count(p.square_free_part(), lo, hi) == 1);
            if (k > 0) CHECK(roots[k - 1].second <= lo);
        }
    }
}

TEST_CASE("rational roots land inside an isolating interval") {
    UniPoly x = UniPoly::x();
    // roots 1/2 and -3
    UniPoly p = (x.scaled(Rational(2)) - UniPoly(Rational(1))) * (x + UniPoly(Rational(3)));
    auto roots = isolate_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].first < Rational(-3));
    CHECK(Rational(-3) < roots[0].second);
    CHECK(roots[1].first < Rational(1, 2));
    CHECK(Rational(1, 2) < roots[1].second);
}

TEST_CASE("multipoly ring axioms on random triples") {
    testgen::Rng rng(104);
    for (int i = 0; i < 200; ++i) {
        MultiPoly a = testgen::multipoly(rng, 3, 4, 3);
        MultiPoly b = testgen::multipoly(rng, 3, 4, 3);
        MultiPoly c = testgen::multipoly(rng, 3, 4, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == MultiPoly());
    }
}

TEST_CASE("multipoly evaluation is a ring homomorphism") {
    testgen::Rng rng(105);
    for (int i = 0; i < 100; ++i) {
        MultiPoly a = testgen::multipoly(rng, 3, 4, 3);
        MultiPoly b = testgen::multipoly(rng, 3, 4, 3);
        std::map<int, Rational> env;
        for (int v = 0; v < 3; ++v) env[v] = testgen::rat(rng);
        CHECK((a + b).eval(env) == a.eval(env) + b.eval(env));
        CHECK((a * b).eval(env) == a.eval(env) * b.eval(env));
    }
}

TEST_CASE("coefficient split round-trips") {
    testgen::Rng rng(106);
    for (int i = 0; i < 100; ++i) {
        MultiPoly p = testgen::multipoly(rng, 3, 5, 4);
        for (int v = 0; v < 3; ++v)
            CHECK(MultiPoly::from_coeffs(p.coeffs_in(v), v) == p);
    }
}

TEST_CASE("derivative is linear and satisfies the product rule") {
    testgen::Rng rng(107);
    for (int i = 0; i < 100; ++i) {
        MultiPoly a = testgen::multipoly(rng, 2, 4, 3);
        MultiPoly b = testgen::multipoly(rng, 2, 4, 3);
        for (int v = 0; v < 2; ++v) {
            CHECK((a + b).derivative(v) == a.derivative(v) + b.derivative(v));
            CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
        }
    }
}

TEST_CASE("primitive part preserves the sign pattern") {
    testgen::Rng rng(108);
    for (int i = 0; i < 100; ++i) {
        MultiPoly p = testgen::multipoly(rng, 2, 4, 3);
        if (p.is_zero()) continue;
        MultiPoly q = p.primitive_part();
        std::map<int, Rational> env;
        for (int v = 0; v < 2; ++v) env[v] = testgen::rat(rng);
        CHECK(eval_sign(p, env) == eval_sign(q, env));
    }
}

TEST_CASE("pseudo-division identity") {
    testgen::Rng rng(109);
    for (int i = 0; i < 100; ++i) {
        MultiPoly a = testgen::multipoly(rng, 2, 4, 3);
        MultiPoly b = testgen::multipoly(rng, 2, 4, 3);
        if (b.degree_in(0) < 1) continue;
        PseudoDivision pd = pseudo_division(a, b, 0);
        CHECK(pd.multiplier * a == pd.quotient * b + pd.remainder);
        CHECK(pd.remainder.degree_in(0) < b.degree_in(0));
    }
}
