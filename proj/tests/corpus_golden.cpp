// Runs the command-line tool over the checked-in corpus and compares its
// output, split into whitespace tokens, against the golden files (one
// expected token per line). Also checks the exit-code contract:
// 0 = valid / success, 1 = invalid / different, 2 = error.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

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

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::string corpus(const std::string& name) { return std::string(CORPUS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check(const std::string& label, const std::string& args, const std::string& golden,
           int want_exit) {
    RunResult r = run(args);
    std::vector<std::string> got = tokens(r.out);
    std::vector<std::string> want = tokens(slurp(corpus("golden/" + golden)));
    bool ok = r.exit_code == want_exit && got == want && !want.empty();
    if (!ok) {
        ++failures;
        std::cout << "FAIL " << label << " (exit " << r.exit_code << ", want " << want_exit
                  << ")\n  got:";
        for (const auto& t : got) std::cout << ' ' << t;
        std::cout << "\n  want:";
        for (const auto& t : want) std::cout << ' ' << t;
        std::cout << "\n";
    } else {
        std::cout << "ok   " << label << "\n";
    }
}

} // namespace

int main() {
    const char* decides[] = {
        "analysis",          "axiom_01_distrib",    "axiom_02_add_assoc",
        "axiom_03_mul_assoc","axiom_04_add_comm",   "axiom_05_mul_comm",
        "axiom_06_add_unit", "axiom_07_add_inverse","axiom_08_mul_unit",
        "axiom_09_mul_inverse", "axiom_09_mul_inverse_S", "axiom_10_refl",
        "axiom_11_trans",    "axiom_12_antisym",    "axiom_13_total",
        "axiom_14_mono_add", "axiom_15_pos_mul",    "axiom_16_sqrt",
        "axiom_17_odd_root", "fib_behavioral",      "fib_behavioral_wrong",
        "functionality",     "imaginary",           "noninterference",
        "obs_equiv",         "order_lt_millionth",  "order_lt_one",
        "order_lt_tenth",    "order_not_zero",      "order_pos",
        "order_square",      "sqrt_exists",         "synthesis",
    };
    for (const char* name : decides) {
        std::string golden = std::string(name) + ".golden";
        std::string want = slurp(corpus("golden/" + golden));
        int want_exit = want.find("INVALID") != std::string::npos ? 1 : 0;
        check(std::string("decide ") + name, "decide " + corpus(std::string(name) + ".slog"),
              golden, want_exit);
    }

    for (const char* name : {"bisim_eq", "bisim_plus_one", "bisim_shift"}) {
        std::string golden = std::string(name) + ".golden";
        std::string want = slurp(corpus("golden/" + golden));
        int want_exit = want.find("INVALID") != std::string::npos ? 1 : 0;
        check(std::string("bisim ") + name, "bisim " + corpus(std::string(name) + ".slog"),
              golden, want_exit);
    }

    check("transfer fig1", "circuit " + corpus("fig1.sc") + " --transfer y --input z",
          "fig1.transfer.golden", 0);
    check("transfer delay", "circuit " + corpus("delay.sc") + " --transfer y --input z",
          "delay.transfer.golden", 0);
    check("simulate fig1", "circuit " + corpus("fig1.sc") + " --simulate 7",
          "fig1.simulate.golden", 0);
    check("verify fig1 ones",
          "circuit " + corpus("fig1.sc") + " --verify " + corpus("claim_ones.slog"),
          "fig1.verify_ones.golden", 0);
    check("verify fig1 identity",
          "circuit " + corpus("fig1.sc") + " --verify " + corpus("claim_identity.slog"),
          "fig1.verify_identity.golden", 1);
    check("coeffs fibonacci", "coeffs \"X/(1-X-X^2)\" --count 7", "fib.coeffs.golden", 0);
    check("coeffs catalan", "coeffs catalan --count 8", "catalan.coeffs.golden", 0);

    // Error-path exit codes (no goldens: only the code is contractual).
    {
        RunResult r = run("circuit " + corpus("loop_no_delay.sc") + " --transfer y --input z");
        if (r.exit_code != 2) {
            ++failures;
            std::cout << "FAIL algebraic loop exit code: " << r.exit_code << "\n";
        } else {
            std::cout << "ok   algebraic loop exit code\n";
        }
    }
    {
        RunResult r = run("decide /nonexistent.slog");
        if (r.exit_code != 2) {
            ++failures;
            std::cout << "FAIL missing file exit code: " << r.exit_code << "\n";
        } else {
            std::cout << "ok   missing file exit code\n";
        }
    }

    if (failures) {
        std::cout << failures << " corpus case(s) failed\n";
        return 1;
    }
    std::cout << "corpus clean\n";
    return 0;
}
