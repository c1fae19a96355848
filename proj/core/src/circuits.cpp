#include "streamlogic/circuits.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "streamlogic/errors.hpp"

namespace streamlogic {

bool Circuit::is_input(const std::string& s) const {
    return std::find(inputs.begin(), inputs.end(), s) != inputs.end();
}

const Circuit::Node* Circuit::find_node(const std::string& s) const {
    for (const auto& n : nodes)
        if (n.name == s) return &n;
    return nullptr;
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> w;
    std::string s;
    while (in >> s) {
        if (s[0] == '#') break;
        w.push_back(s);
    }
    return w;
}

Rational parse_rat(const std::string& s) {
    try {
        Rational r(s);
        r.canonicalize();
        return r;
    } catch (...) {
        throw Error(ErrorCode::PARSE_ERROR, "bad rational: " + s);
    }
}

void check_refs(const Circuit& c) {
    std::set<std::string> defined;
    for (const auto& i : c.inputs)
        if (!defined.insert(i).second)
            throw Error(ErrorCode::CIRCUIT_ERROR, "duplicate signal: " + i);
    for (const auto& n : c.nodes)
        if (!defined.insert(n.name).second)
            throw Error(ErrorCode::CIRCUIT_ERROR, "duplicate signal: " + n.name);
    for (const auto& n : c.nodes)
        for (const auto& a : n.args)
            if (!defined.count(a))
                throw Error(ErrorCode::CIRCUIT_ERROR, "undefined signal: " + a);
    std::set<std::string> ports;
    for (const auto& [port, src] : c.outputs) {
        if (!ports.insert(port).second)
            throw Error(ErrorCode::CIRCUIT_ERROR, "duplicate output port: " + port);
        if (!defined.count(src))
            throw Error(ErrorCode::CIRCUIT_ERROR, "undefined signal: " + src);
    }
}

} // namespace

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto w = split_words(line);
        if (w.empty()) continue;
        auto fail = [&](const std::string& why) -> void {
            throw Error(ErrorCode::PARSE_ERROR,
                        "line " + std::to_string(lineno) + ": " + why);
        };
        if (w[0] == "input") {
            if (w.size() != 2) fail("expected: input <name>");
            c.inputs.push_back(w[1]);
        } else if (w[0] == "node") {
            if (w.size() < 5 || w[2] != "=") fail("expected: node <name> = <op> <args>");
            Circuit::Node n;
            n.name = w[1];
            const std::string& op = w[3];
            if (op == "delay") {
                if (w.size() != 5) fail("delay takes one argument");
                n.kind = Circuit::Node::Delay;
                n.args = {w[4]};
            } else if (op == "copy") {
                if (w.size() != 5) fail("copy takes one argument");
                n.kind = Circuit::Node::Copy;
                n.args = {w[4]};
            } else if (op == "add") {
                if (w.size() != 6) fail("add takes two arguments");
                n.kind = Circuit::Node::Add;
                n.args = {w[4], w[5]};
            } else if (op == "scale") {
                if (w.size() != 6) fail("expected: scale <rational> <signal>");
                n.kind = Circuit::Node::Scale;
                n.k = parse_rat(w[4]);
                n.args = {w[5]};
            } else {
                fail("unknown operation: " + op);
            }
            c.nodes.push_back(std::move(n));
        } else if (w[0] == "output") {
            if (w.size() != 4 || w[2] != "=") fail("expected: output <port> = <signal>");
            c.outputs.emplace_back(w[1], w[3]);
        } else {
            fail("unknown declaration: " + w[0]);
        }
    }
    check_refs(c);
    return c;
}

std::vector<FormulaPtr> to_equations(const Circuit& c) {
    std::vector<FormulaPtr> eqs;
    for (const auto& n : c.nodes) {
        TermPtr rhs;
        switch (n.kind) {
            case Circuit::Node::Delay:
                rhs = Term::mul(Term::x_const(), Term::var(n.args[0]));
                break;
            case Circuit::Node::Copy: rhs = Term::var(n.args[0]); break;
            case Circuit::Node::Add:
                rhs = Term::add(Term::var(n.args[0]), Term::var(n.args[1]));
                break;
            case Circuit::Node::Scale:
                rhs = Term::mul(Term::rat_const(n.k), Term::var(n.args[0]));
                break;
        }
        eqs.push_back(Formula::atomic(Term::var(n.name), Rel::EQ, rhs));
    }
    for (const auto& [port, src] : c.outputs)
        if (port != src)
            eqs.push_back(Formula::atomic(Term::var(port), Rel::EQ, Term::var(src)));
    return eqs;
}

namespace {

// Dependency cycle through non-delay edges only.
bool has_instant_cycle(const Circuit& c) {
    std::map<std::string, int> state; // 0 new, 1 active, 2 done
    std::function<bool(const std::string&)> dfs = [&](const std::string& s) -> bool {
        const Circuit::Node* n = c.find_node(s);
        if (!n) return false; // input
        int& st = state[s];
        if (st == 1) return true;
        if (st == 2) return false;
        st = 1;
        if (n->kind != Circuit::Node::Delay)
            for (const auto& a : n->args)
                if (dfs(a)) return true;
        st = 2;
        return false;
    };
    for (const auto& n : c.nodes)
        if (dfs(n.name)) return true;
    return false;
}

// Solve the defining linear system; returns, per signal, its expansion as a
// linear combination of the inputs.
std::map<std::string, std::map<std::string, LaurentRational>> solve_system(const Circuit& c) {
    const size_t n = c.nodes.size();
    std::map<std::string, size_t> col;
    for (size_t i = 0; i < n; ++i) col[c.nodes[i].name] = i;

    const LaurentRational one = LaurentRational::constant(Rational(1));
    std::vector<std::vector<LaurentRational>> A(n, std::vector<LaurentRational>(n));
    std::vector<std::map<std::string, LaurentRational>> rhs(n);

    auto add_dep = [&](size_t row, const std::string& sig, const LaurentRational& w) {
        if (c.is_input(sig)) rhs[row][sig] = rhs[row][sig] + w;
        else A[row][col.at(sig)] = A[row][col.at(sig)] - w;
    };
    for (size_t i = 0; i < n; ++i) {
        const auto& node = c.nodes[i];
        A[i][i] = one;
        switch (node.kind) {
            case Circuit::Node::Delay: add_dep(i, node.args[0], LaurentRational::x()); break;
            case Circuit::Node::Copy: add_dep(i, node.args[0], one); break;
            case Circuit::Node::Add:
                add_dep(i, node.args[0], one);
                add_dep(i, node.args[1], one);
                break;
            case Circuit::Node::Scale:
                add_dep(i, node.args[0], LaurentRational::constant(node.k));
                break;
        }
    }

    bool instant_cycle = has_instant_cycle(c);
    bool singular = false;
    for (size_t k = 0; k < n && !singular; ++k) {
        size_t piv = k;
        while (piv < n && A[piv][k].is_zero()) ++piv;
        if (piv == n) { singular = true; break; }
        std::swap(A[piv], A[k]);
        std::swap(rhs[piv], rhs[k]);
        LaurentRational inv = one / A[k][k];
        for (size_t j = k; j < n; ++j) A[k][j] = A[k][j] * inv;
        for (auto& [name, v] : rhs[k]) v = v * inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == k || A[r][k].is_zero()) continue;
            LaurentRational f = A[r][k];
            for (size_t j = k; j < n; ++j) A[r][j] = A[r][j] - f * A[k][j];
            for (const auto& [name, v] : rhs[k]) rhs[r][name] = rhs[r][name] - f * v;
        }
    }
    if (singular != instant_cycle)
        throw Error(ErrorCode::INTERNAL, "loop analyses disagree");
    if (singular)
        throw Error(ErrorCode::ALGEBRAIC_LOOP, "dependency cycle without a delay");

    std::map<std::string, std::map<std::string, LaurentRational>> sol;
    for (size_t i = 0; i < n; ++i) sol[c.nodes[i].name] = rhs[i];
    for (const auto& in : c.inputs) sol[in][in] = one;
    return sol;
}

} // namespace

LaurentRational transfer(const Circuit& c, const std::string& output, const std::string& input) {
    if (!c.is_input(input))
        throw Error(ErrorCode::CIRCUIT_ERROR, "not an input: " + input);
    std::string src;
    for (const auto& [port, s] : c.outputs)
        if (port == output) src = s;
    if (src.empty()) throw Error(ErrorCode::CIRCUIT_ERROR, "not an output: " + output);
    auto sol = solve_system(c);
    LaurentRational t = sol.at(src)[input];
    Valuation v = t.valuation();
    if (v.finite && v.value < 0)
        throw Error(ErrorCode::NOT_CAUSAL, "transfer has a pole at 0: " + t.to_string());
    return t;
}

bool equivalent(const Circuit& a, const Circuit& b) {
    std::set<std::string> ia(a.inputs.begin(), a.inputs.end());
    std::set<std::string> ib(b.inputs.begin(), b.inputs.end());
    if (ia != ib) return false;
    std::set<std::string> oa, ob;
    for (const auto& [p, s] : a.outputs) oa.insert(p);
    for (const auto& [p, s] : b.outputs) ob.insert(p);
    if (oa != ob) return false;
    for (const auto& out : oa)
        for (const auto& in : ia)
            if (!(transfer(a, out, in) == transfer(b, out, in))) return false;
    return true;
}

FormulaPtr encode_logic(const Circuit& c, const FormulaPtr& claim) {
    FormulaPtr eqs = Formula::truth(true);
    for (const auto& e : to_equations(c)) eqs = Formula::conj(eqs, e);
    FormulaPtr body = Formula::implies(eqs, claim);
    std::vector<std::string> vars = c.inputs;
    for (const auto& n : c.nodes) vars.push_back(n.name);
    for (const auto& [port, src] : c.outputs)
        if (port != src) vars.push_back(port);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = Formula::forall(*it, Sort::S, body);
    return body;
}

std::map<std::string, std::vector<Rational>> simulate(
    const Circuit& c, const std::map<std::string, std::vector<Rational>>& input_prefix,
    int steps) {
    if (has_instant_cycle(c))
        throw Error(ErrorCode::ALGEBRAIC_LOOP, "no evaluation order");
    std::map<std::string, std::vector<Rational>> out;
    for (const auto& in : c.inputs) {
        auto it = input_prefix.find(in);
        if (it == input_prefix.end() || static_cast<int>(it->second.size()) < steps)
            throw Error(ErrorCode::CIRCUIT_ERROR, "input prefix too short: " + in);
        out[in] = it->second;
    }
    for (int t = 0; t < steps; ++t) {
        std::function<Rational(const std::string&)> value = [&](const std::string& s) -> Rational {
            auto& trace = out[s];
            if (static_cast<int>(trace.size()) > t) return trace[t];
            const Circuit::Node* n = c.find_node(s);
            Rational v;
            switch (n->kind) {
                case Circuit::Node::Delay:
                    v = t == 0 ? Rational(0) : out[n->args[0]][t - 1];
                    break;
                case Circuit::Node::Copy: v = value(n->args[0]); break;
                case Circuit::Node::Add: v = value(n->args[0]) + value(n->args[1]); break;
                case Circuit::Node::Scale: v = n->k * value(n->args[0]); break;
            }
            trace.resize(t + 1);
            trace[t] = v;
            return v;
        };
        for (const auto& n : c.nodes) value(n.name);
    }
    for (const auto& [port, src] : c.outputs)
        if (port != src) out[port] = out[src];
    return out;
}

} // namespace streamlogic
