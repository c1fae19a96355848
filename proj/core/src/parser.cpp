#include "streamlogic/parser.hpp"

#include <cctype>
#include <vector>

#include "streamlogic/errors.hpp"
#include "streamlogic/transform.hpp"

namespace streamlogic {

namespace {

enum class Tok {
    Ident, Number, X,
    Plus, Minus, Star, Slash, Caret,
    LParen, RParen, LBr2, RBr2, Comma, Dot, Colon,
    And, Or, Imp, Iff, Not,
    Eq, Neq, Le, Lt, Ge, Gt, Divides,
    Forall, Exists, Hd, Tl, Cons,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    size_t pos = 0;
    int line = 1, col = 1;
    auto bump = [&] {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    };
    auto fail = [&](const std::string& msg) -> void {
        throw Error(ErrorCode::PARSE_ERROR, msg + " at line " + std::to_string(line) +
                                                ", column " + std::to_string(col));
    };
    while (true) {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) {
            t.kind = Tok::End;
            out.push_back(std::move(t));
            return out;
        }
        auto starts = [&](const char* s) {
            size_t n = 0;
            while (s[n]) {
                if (pos + n >= src.size() || src[pos + n] != s[n]) return false;
                ++n;
            }
            return true;
        };
        auto take = [&](size_t n, Tok k) {
            t.kind = k;
            t.text = src.substr(pos, n);
            for (size_t i = 0; i < n; ++i) bump();
            out.push_back(t);
        };
        char c = src[pos];
        if (starts("<->")) { take(3, Tok::Iff); continue; }
        if (starts("/\\")) { take(2, Tok::And); continue; }
        if (starts("\\/")) { take(2, Tok::Or); continue; }
        if (starts("->")) { take(2, Tok::Imp); continue; }
        if (starts("[[")) { take(2, Tok::LBr2); continue; }
        if (starts("]]")) { take(2, Tok::RBr2); continue; }
        if (starts("!=")) { take(2, Tok::Neq); continue; }
        if (starts("<=")) { take(2, Tok::Le); continue; }
        if (starts(">=")) { take(2, Tok::Ge); continue; }
        switch (c) {
            case '+': take(1, Tok::Plus); continue;
            case '-': take(1, Tok::Minus); continue;
            case '*': take(1, Tok::Star); continue;
            case '/': take(1, Tok::Slash); continue;
            case '^': take(1, Tok::Caret); continue;
            case '(': take(1, Tok::LParen); continue;
            case ')': take(1, Tok::RParen); continue;
            case ',': take(1, Tok::Comma); continue;
            case '.': take(1, Tok::Dot); continue;
            case ':': take(1, Tok::Colon); continue;
            case '~': take(1, Tok::Not); continue;
            case '=': take(1, Tok::Eq); continue;
            case '<': take(1, Tok::Lt); continue;
            case '>': take(1, Tok::Gt); continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) bump();
            t.kind = Tok::Number;
            t.text = src.substr(start, pos - start);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                    src[pos] == '\''))
                bump();
            t.text = src.substr(start, pos - start);
            if (t.text == "forall") t.kind = Tok::Forall;
            else if (t.text == "exists") t.kind = Tok::Exists;
            else if (t.text == "divides") t.kind = Tok::Divides;
            else if (t.text == "hd") t.kind = Tok::Hd;
            else if (t.text == "tl") t.kind = Tok::Tl;
            else if (t.text == "cons") t.kind = Tok::Cons;
            else if (t.text == "X") t.kind = Tok::X;
            else t.kind = Tok::Ident;
            out.push_back(std::move(t));
            continue;
        }
        fail(std::string("unexpected character '") + c + "'");
    }
}

class Parser {
  public:
    explicit Parser(const std::string& src) : toks_(tokenize(src)) {}

    FormulaPtr formula_file() {
        FormulaPtr f = formula();
        if (peek().kind != Tok::End) fail("trailing input after formula");
        return alpha_rename(f);
    }

    LaurentRational stream_file() {
        LaurentRational f = sexpr();
        if (peek().kind != Tok::End) fail("trailing input after expression");
        return f;
    }

  private:
    const Token& peek() const { return toks_[idx_]; }
    const Token& next() { return toks_[idx_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw Error(ErrorCode::PARSE_ERROR, msg + " at line " + std::to_string(t.line) +
                                                ", column " + std::to_string(t.col));
    }

    bool accept(Tok k) {
        if (peek().kind == k) {
            ++idx_;
            return true;
        }
        return false;
    }

    void expect(Tok k, const char* what) {
        if (!accept(k)) fail(std::string("expected ") + what);
    }

    FormulaPtr formula() { return iff_formula(); }

    FormulaPtr iff_formula() {
        FormulaPtr l = imp_formula();
        if (accept(Tok::Iff)) return Formula::iff(l, iff_formula());
        return l;
    }

    FormulaPtr imp_formula() {
        FormulaPtr l = or_formula();
        if (accept(Tok::Imp)) return Formula::implies(l, imp_formula());
        return l;
    }

    FormulaPtr or_formula() {
        FormulaPtr l = and_formula();
        while (accept(Tok::Or)) l = Formula::disj(l, and_formula());
        return l;
    }

    FormulaPtr and_formula() {
        FormulaPtr l = unary_formula();
        while (accept(Tok::And)) l = Formula::conj(l, unary_formula());
        return l;
    }

    FormulaPtr unary_formula() {
        if (accept(Tok::Not)) return Formula::negation(unary_formula());
        if (peek().kind == Tok::Forall || peek().kind == Tok::Exists) {
            bool universal = next().kind == Tok::Forall;
            if (peek().kind != Tok::Ident) fail("expected variable name after quantifier");
            std::string name = next().text;
            Sort s = Sort::S;
            if (accept(Tok::Colon)) {
                std::string st;
                if (peek().kind == Tok::Ident) st = next().text;
                else fail("expected sort S or L");
                if (st == "S") s = Sort::S;
                else if (st == "L") s = Sort::L;
                else fail("unknown sort '" + st + "'");
            }
            expect(Tok::Dot, "'.' after quantifier binder");
            FormulaPtr body = formula();
            return universal ? Formula::forall(name, s, body) : Formula::exists(name, s, body);
        }
        if (peek().kind == Tok::LParen) {
            // '(' opens either a subformula or a term; try the formula parse
            // and fall back to an atom.
            size_t save = idx_;
            try {
                ++idx_;
                FormulaPtr f = formula();
                expect(Tok::RParen, "')'");
                if (is_rel_start(peek().kind) || is_term_op(peek().kind))
                    fail("parenthesized formula used as term");
                return f;
            } catch (const Error&) {
                idx_ = save;
                return atom();
            }
        }
        return atom();
    }

    static bool is_rel_start(Tok k) {
        switch (k) {
            case Tok::Eq:
            case Tok::Neq:
            case Tok::Le:
            case Tok::Lt:
            case Tok::Ge:
            case Tok::Gt:
            case Tok::Divides: return true;
            default: return false;
        }
    }

    static bool is_term_op(Tok k) {
        switch (k) {
            case Tok::Plus:
            case Tok::Minus:
            case Tok::Star:
            case Tok::Caret: return true;
            default: return false;
        }
    }

    FormulaPtr atom() {
        TermPtr lhs = term();
        Tok k = peek().kind;
        if (!is_rel_start(k)) fail("expected relation in atom");
        next();
        TermPtr rhs = term();
        switch (k) {
            case Tok::Eq: return Formula::atomic(lhs, Rel::EQ, rhs);
            case Tok::Neq: return Formula::negation(Formula::atomic(lhs, Rel::EQ, rhs));
            case Tok::Le: return Formula::atomic(lhs, Rel::LE, rhs);
            case Tok::Lt: return Formula::atomic(lhs, Rel::LT, rhs);
            case Tok::Ge: return Formula::atomic(rhs, Rel::LE, lhs);
            case Tok::Gt: return Formula::atomic(rhs, Rel::LT, lhs);
            default: return Formula::atomic(lhs, Rel::DIVIDES, rhs);
        }
    }

    TermPtr term() {
        TermPtr l = mul_term();
        while (true) {
            if (accept(Tok::Plus)) l = Term::add(l, mul_term());
            else if (accept(Tok::Minus)) l = Term::sub(l, mul_term());
            else return l;
        }
    }

    TermPtr mul_term() {
        TermPtr l = unary_term();
        while (accept(Tok::Star)) l = Term::mul(l, unary_term());
        return l;
    }

    TermPtr unary_term() {
        if (accept(Tok::Minus)) return Term::neg(unary_term());
        return power_term();
    }

    TermPtr power_term() {
        TermPtr base = primary_term();
        if (accept(Tok::Caret)) {
            if (peek().kind != Tok::Number) fail("expected integer exponent");
            long e = std::stol(next().text);
            if (e == 0) return Term::rat_const(Rational(1));
            TermPtr r = base;
            for (long i = 1; i < e; ++i) r = Term::mul(r, base);
            return r;
        }
        return base;
    }

    TermPtr primary_term() {
        switch (peek().kind) {
            case Tok::Number: {
                Rational q(next().text);
                // "p/q" over integer literals is a rational literal.
                if (peek().kind == Tok::Slash && toks_[idx_ + 1].kind == Tok::Number) {
                    next();
                    Rational d(next().text);
                    if (sgn(d) == 0) fail("zero denominator in rational literal");
                    q /= d;
                }
                return Term::rat_const(q);
            }
            case Tok::X: next(); return Term::x_const();
            case Tok::LBr2: {
                next();
                LaurentRational f = sexpr();
                expect(Tok::RBr2, "']]'");
                return Term::stream_const(std::move(f));
            }
            case Tok::Ident: return Term::var(next().text);
            case Tok::Hd: {
                next();
                expect(Tok::LParen, "'('");
                TermPtr x = term();
                expect(Tok::RParen, "')'");
                return Term::hd(x);
            }
            case Tok::Tl: {
                next();
                expect(Tok::LParen, "'('");
                TermPtr x = term();
                expect(Tok::RParen, "')'");
                return Term::tl(x);
            }
            case Tok::Cons: {
                next();
                expect(Tok::LParen, "'('");
                TermPtr h = term();
                expect(Tok::Comma, "','");
                TermPtr x = term();
                expect(Tok::RParen, "')'");
                return Term::cons(h, x);
            }
            case Tok::LParen: {
                next();
                TermPtr x = term();
                expect(Tok::RParen, "')'");
                return x;
            }
            default: fail("expected term");
        }
    }

    // Closed-form stream expressions: full field arithmetic over X.
    LaurentRational sexpr() {
        LaurentRational l = smul();
        while (true) {
            if (accept(Tok::Plus)) l = l + smul();
            else if (accept(Tok::Minus)) l = l - smul();
            else return l;
        }
    }

    LaurentRational smul() {
        LaurentRational l = sunary();
        while (true) {
            if (accept(Tok::Star)) l = l * sunary();
            else if (accept(Tok::Slash)) l = l / sunary();
            else return l;
        }
    }

    LaurentRational sunary() {
        if (accept(Tok::Minus)) return -sunary();
        return spower();
    }

    LaurentRational spower() {
        LaurentRational base = sprimary();
        if (accept(Tok::Caret)) {
            if (peek().kind != Tok::Number) fail("expected integer exponent");
            long e = std::stol(next().text);
            LaurentRational r{Rational(1)};
            for (long i = 0; i < e; ++i) r = r * base;
            return r;
        }
        return base;
    }

    LaurentRational sprimary() {
        switch (peek().kind) {
            case Tok::Number: return LaurentRational(Rational(next().text));
            case Tok::X: next(); return LaurentRational::x();
            case Tok::LParen: {
                next();
                LaurentRational f = sexpr();
                expect(Tok::RParen, "')'");
                return f;
            }
            default: fail("expected stream expression");
        }
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

} // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).formula_file(); }

LaurentRational parse_stream_expr(const std::string& text) { return Parser(text).stream_file(); }

} // namespace streamlogic
