#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "random_gen.hpp"
#include "streamlogic/circuits.hpp"
#include "streamlogic/errors.hpp"
#include "streamlogic/parser.hpp"
#include "streamlogic/qe.hpp"

using namespace streamlogic;

namespace {

const char* kFeedback = R"(
# running-sum feedback loop
input z
node h1 = delay h2
node h3 = add z h1
node h2 = copy h3
output y = h3
)";

const char* kAccumulator = R"(
input z
node s = add z d
node d = delay s
output y = s
)";

const char* kDelayOnly = "input z\nnode d = delay z\noutput y = d\n";

const char* kScaleChain = R"(
input z
node a = scale 3/2 z
node b = scale 2 a
output y = b
)";

Circuit circ(const std::string& s) { return parse_circuit(s); }

void expect_error(const std::string& text, ErrorCode code) {
    try {
        (void)parse_circuit(text);
        FAIL_CHECK("expected error for: " << text);
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

} // namespace

TEST_CASE("parser accepts the line grammar and records the shape") {
    Circuit c = circ(kFeedback);
    CHECK(c.inputs == std::vector<std::string>{"z"});
    CHECK(c.nodes.size() == 3);
    REQUIRE(c.outputs.size() == 1);
    CHECK(c.outputs[0].first == "y");
    CHECK(c.outputs[0].second == "h3");
    CHECK(c.is_input("z"));
    CHECK(!c.is_input("h1"));
    REQUIRE(c.find_node("h1") != nullptr);
    CHECK(c.find_node("h1")->kind == Circuit::Node::Delay);
    CHECK(c.find_node("zzz") == nullptr);
}

TEST_CASE("parser rejects malformed and inconsistent circuits") {
    expect_error("input z\nnode a = frobnicate z\noutput y = a\n", ErrorCode::PARSE_ERROR);
    expect_error("input z\nnode a delay z\noutput y = a\n", ErrorCode::PARSE_ERROR);
    expect_error("input z\nnode a = scale x z\noutput y = a\n", ErrorCode::PARSE_ERROR);
    // dangling reference
    expect_error("input z\nnode a = delay b\noutput y = a\n", ErrorCode::CIRCUIT_ERROR);
    // duplicate definitions
    expect_error("input z\nnode a = delay z\nnode a = copy z\noutput y = a\n",
                 ErrorCode::CIRCUIT_ERROR);
    expect_error("input z\ninput z\noutput y = z\n", ErrorCode::CIRCUIT_ERROR);
    // add arity
    expect_error("input z\nnode a = add z\noutput y = a\n", ErrorCode::PARSE_ERROR);
}

TEST_CASE("defining equations cover every internal signal") {
    Circuit c = circ(kFeedback);
    auto eqs = to_equations(c);
    // One equation per internal node plus one per renamed output port.
    CHECK(eqs.size() == c.nodes.size() + 1);
    for (const auto& e : eqs) CHECK(e->kind == FKind::Atomic);
}

TEST_CASE("transfer functions of the reference circuits") {
    CHECK(transfer(circ(kFeedback), "y", "z") == parse_stream_expr("1/(1-X)"));
    CHECK(transfer(circ(kAccumulator), "y", "z") == parse_stream_expr("1/(1-X)"));
    CHECK(transfer(circ(kDelayOnly), "y", "z") == parse_stream_expr("X"));
    CHECK(transfer(circ(kScaleChain), "y", "z") == parse_stream_expr("3"));
}

TEST_CASE("a feedback cycle without a delay is an algebraic loop") {
    const char* loop = "input z\nnode a = add z b\nnode b = copy a\noutput y = a\n";
    Circuit c = circ(loop);
    try {
        (void)transfer(c, "y", "z");
        FAIL_CHECK("expected ALGEBRAIC_LOOP from transfer");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ALGEBRAIC_LOOP);
    }
    // The operational detector agrees with the algebraic one.
    try {
        (void)simulate(c, {{"z", std::vector<Rational>(4, Rational(1))}}, 4);
        FAIL_CHECK("expected ALGEBRAIC_LOOP from simulate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ALGEBRAIC_LOOP);
    }
}

TEST_CASE("equivalence compares transfer functions per port pair") {
    CHECK(equivalent(circ(kFeedback), circ(kAccumulator)));
    CHECK(!equivalent(circ(kFeedback), circ(kDelayOnly)));
    // Different port names are not equivalent.
    CHECK(!equivalent(circ(kDelayOnly), circ("input w\nnode d = delay w\noutput y = d\n")));
}

TEST_CASE("simulation matches the transfer-function convolution") {
    testgen::Rng rng(501);
    const int steps = 32;
    for (const char* src : {kFeedback, kAccumulator, kDelayOnly, kScaleChain}) {
        Circuit c = circ(src);
        LaurentRational h = transfer(c, "y", "z");
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Rational> in;
            for (int i = 0; i < steps; ++i) in.push_back(testgen::rat(rng, 5));
            auto run = simulate(c, {{"z", in}}, steps);
            const std::string& sig = c.outputs[0].second;
            REQUIRE(run.count(sig));
            REQUIRE(static_cast<int>(run.at(sig).size()) >= steps);
            for (int nn = 0; nn < steps; ++nn) {
                Rational want(0);
                for (int k = 0; k <= nn; ++k) want += h.coeff_at(k) * in[static_cast<size_t>(nn - k)];
                CHECK(run.at(sig)[static_cast<size_t>(nn)] == want);
            }
        }
    }
}

TEST_CASE("logical encoding of a circuit claim is decidable and correct") {
    Circuit c = circ(kFeedback);
    FormulaPtr good = parse_formula("y = [[1/(1-X)]] * z");
    FormulaPtr bad = parse_formula("y = z");
    CHECK(decide(encode_logic(c, good)).valid);
    CHECK(!decide(encode_logic(c, bad)).valid);
}

TEST_CASE("encoding quantifies the internal signals universally") {
    Circuit c = circ(kDelayOnly);
    FormulaPtr f = encode_logic(c, parse_formula("y = [[X]] * z"));
    CHECK(free_vars(f).empty());
    CHECK(f->kind == FKind::Forall);
}
