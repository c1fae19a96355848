#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <cctype>

#include <CLI11.hpp>

#include "streamlogic/circuits.hpp"
#include "streamlogic/errors.hpp"
#include "streamlogic/parser.hpp"
#include "streamlogic/qe.hpp"
#include "streamlogic/trunc_series.hpp"

namespace {

using namespace streamlogic;

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::PARSE_ERROR, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(int argc, char** argv) {
    CLI::App app{"decision tool for first-order stream logic"};
    app.require_subcommand(1);

    long budget = QeOptions{}.budget;
    bool trace = false, no_presolve = false, infinitesimal = false;
    app.add_option("--budget", budget, "elimination work budget");
    app.add_flag("--trace", trace, "progress notes on stderr");
    app.add_flag("--no-presolve", no_presolve, "disable linear presolve");

    std::string in_path = "-";
    auto* cmd_decide = app.add_subcommand("decide", "decide a sentence: VALID or INVALID");
    cmd_decide->add_option("file", in_path, "formula file, or - for stdin");

    std::string elim_path = "-";
    auto* cmd_elim = app.add_subcommand("eliminate", "print a quantifier-free equivalent");
    cmd_elim->add_option("file", elim_path, "formula file, or - for stdin");
    cmd_elim->add_flag("--infinitesimal", infinitesimal,
                       "decide polynomials in X alone by their valuation sign");

    std::string expr;
    int count = 10;
    auto* cmd_coeffs = app.add_subcommand("coeffs", "expand a closed-form stream");
    cmd_coeffs->add_option("expr", expr, "stream expression over X")->required();
    cmd_coeffs->add_option("--count", count, "number of coefficients");

    std::string circ_path, equiv_path, xfer_out, xfer_in, verify_path;
    int sim_steps = 0;
    auto* cmd_circuit = app.add_subcommand("circuit", "analyze a stream circuit");
    cmd_circuit->add_option("file", circ_path, "circuit file")->required();
    auto* opt_xo = cmd_circuit->add_option("--transfer", xfer_out, "output port");
    cmd_circuit->add_option("--input", xfer_in, "input port for --transfer");
    cmd_circuit->add_option("--equiv", equiv_path, "compare against another circuit");
    cmd_circuit->add_option("--simulate", sim_steps, "steps of operational simulation");
    cmd_circuit->add_option("--verify", verify_path, "decide a claim over the circuit signals");

    std::string bisim_path = "-", bx = "x", by = "y";
    auto* cmd_bisim = app.add_subcommand("bisim", "decide a coinduction step for a relation");
    cmd_bisim->add_option("file", bisim_path, "relation formula, free in the two variables");
    cmd_bisim->add_option("--lhs", bx, "left variable (default x)");
    cmd_bisim->add_option("--rhs", by, "right variable (default y)");

    CLI11_PARSE(app, argc, argv);

    QeOptions opts;
    opts.budget = budget;
    opts.trace = trace;
    opts.presolve = !no_presolve;
    opts.infinitesimal = infinitesimal;

    if (*cmd_decide) {
        Decision d = decide(parse_formula(slurp(in_path)), opts);
        std::cout << (d.valid ? "VALID" : "INVALID") << "\n";
        return d.valid ? 0 : 1;
    }
    if (*cmd_elim) {
        std::cout << print(eliminate(parse_formula(slurp(elim_path)), opts)) << "\n";
        return 0;
    }
    if (*cmd_coeffs) {
        std::string e = expr;
        while (!e.empty() && std::isspace(static_cast<unsigned char>(e.front()))) e.erase(0, 1);
        while (!e.empty() && std::isspace(static_cast<unsigned char>(e.back()))) e.pop_back();
        if (e == "catalan") {
            TruncSeries cat = catalan_check(count);
            for (int i = 0; i < count; ++i) {
                if (i) std::cout << ' ';
                std::cout << cat.at(i).get_str();
            }
            std::cout << "\n";
            return 0;
        }
        if (e.rfind("sqrt(", 0) == 0 && e.back() == ')') {
            LaurentRational g = parse_stream_expr(e.substr(5, e.size() - 6));
            std::vector<Rational> pre;
            for (int i = 0; i < count; ++i) pre.push_back(g.coeff_at(i));
            TruncSeries r = sqrt_prefix(TruncSeries(0, std::move(pre)), count);
            for (int i = 0; i < count; ++i) {
                if (i) std::cout << ' ';
                std::cout << r.at(i).get_str();
            }
            std::cout << "\n";
            return 0;
        }
        LaurentRational f = parse_stream_expr(expr);
        // Print from index min(v(f), 0) so position k in the output is the
        // coefficient of X^k for ordinary power series.
        long start = 0;
        Valuation v = f.valuation();
        if (v.finite && v.value < 0) start = v.value;
        for (int i = 0; i < count; ++i) {
            if (i) std::cout << ' ';
            std::cout << f.coeff_at(start + i).get_str();
        }
        std::cout << "\n";
        return 0;
    }
    if (*cmd_circuit) {
        Circuit c = parse_circuit(slurp(circ_path));
        if (!verify_path.empty()) {
            FormulaPtr claim = parse_formula(slurp(verify_path));
            Decision d = decide(encode_logic(c, claim), opts);
            std::cout << (d.valid ? "VALID" : "INVALID") << "\n";
            return d.valid ? 0 : 1;
        }
        if (!equiv_path.empty()) {
            bool eq = equivalent(c, parse_circuit(slurp(equiv_path)));
            std::cout << (eq ? "EQUIVALENT" : "DIFFERENT") << "\n";
            return eq ? 0 : 1;
        }
        if (!opt_xo->empty()) {
            if (xfer_in.empty()) {
                if (c.inputs.size() != 1)
                    throw Error(ErrorCode::CIRCUIT_ERROR, "--input required");
                xfer_in = c.inputs[0];
            }
            std::cout << transfer(c, xfer_out, xfer_in).to_string() << "\n";
            return 0;
        }
        if (sim_steps > 0) {
            std::map<std::string, std::vector<Rational>> ins;
            // Impulse on every input: 1, 0, 0, ...
            for (const auto& i : c.inputs) {
                std::vector<Rational> v(sim_steps, Rational(0));
                if (sim_steps > 0) v[0] = 1;
                ins[i] = v;
            }
            auto tr = simulate(c, ins, sim_steps);
            for (const auto& [port, src] : c.outputs) {
                std::cout << port << ":";
                for (const auto& q : tr.at(port)) std::cout << ' ' << q.get_str();
                std::cout << "\n";
            }
            return 0;
        }
        for (const auto& e : to_equations(c)) std::cout << print(e) << "\n";
        return 0;
    }
    if (*cmd_bisim) {
        FormulaPtr body = parse_formula(slurp(bisim_path));
        Decision d = decide(bisim_formula(body, bx, by), opts);
        std::cout << (d.valid ? "VALID" : "INVALID") << "\n";
        return d.valid ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
