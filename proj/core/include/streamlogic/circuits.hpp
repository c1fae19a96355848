#ifndef STREAMLOGIC_CIRCUITS_HPP
#define STREAMLOGIC_CIRCUITS_HPP

#include <map>
#include <string>
#include <vector>

#include "streamlogic/formula.hpp"
#include "streamlogic/laurent.hpp"

namespace streamlogic {

// A signal-flow network over streams: named internal signals defined by
// delay (multiplication by X), pointwise addition, fan-out, and rational
// scaling, with named input and output ports.
struct Circuit {
    struct Node {
        enum Kind { Delay, Add, Copy, Scale } kind;
        std::string name;
        std::vector<std::string> args;
        Rational k; // Scale only
    };

    std::vector<std::string> inputs;
    std::vector<Node> nodes;
    std::vector<std::pair<std::string, std::string>> outputs; // port -> signal

    bool is_input(const std::string& s) const;
    const Node* find_node(const std::string& s) const;
};

// Line format, one declaration per line ('#' starts a comment):
//   input z
//   node h1 = delay h2
//   node h2 = copy h3
//   node h3 = add z h1
//   node h4 = scale 1/2 h3
//   output y = h3
// Throws PARSE_ERROR on malformed lines, CIRCUIT_ERROR on bad references or
// duplicate definitions.
Circuit parse_circuit(const std::string& text);

// One defining equation per internal signal, e.g. h1 = X * h2.
std::vector<FormulaPtr> to_equations(const Circuit& c);

// Exact transfer function from an input port to an output port, by Gaussian
// elimination over rational streams. Throws ALGEBRAIC_LOOP when the defining
// system is singular (equivalently: a dependency cycle without a delay), and
// NOT_CAUSAL when the result has a pole at 0 (negative valuation).
LaurentRational transfer(const Circuit& c, const std::string& output, const std::string& input);

// Equal port names and equal transfer functions on every input/output pair.
bool equivalent(const Circuit& a, const Circuit& b);

// forall signals : S. (equations /\ output bindings) -> claim. The claim may
// mention input, signal, and output port names.
FormulaPtr encode_logic(const Circuit& c, const FormulaPtr& claim);

// Step-by-step operational run: coefficient prefixes of every signal given
// prefixes of the inputs. Delays emit 0 first. Throws ALGEBRAIC_LOOP when no
// evaluation order exists.
std::map<std::string, std::vector<Rational>> simulate(
    const Circuit& c, const std::map<std::string, std::vector<Rational>>& input_prefix,
    int steps);

} // namespace streamlogic

#endif
