#include "streamlogic/qe.hpp"

#include <algorithm>
#include <cstdio>
#include <pthread.h>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "streamlogic/errors.hpp"
#include "streamlogic/genpoly.hpp"
#include "streamlogic/multipoly.hpp"
#include "streamlogic/transform.hpp"

namespace streamlogic {

Sign sign_at_infinitesimal(const UniPoly& p) {
    if (p.is_zero()) return Sign::ZERO;
    return sign_of(p.coeff(p.low_degree()));
}

namespace {

// ---------------------------------------------------------------------------
// Internal quantifier-free form: polynomial atoms p ~ 0 with ~ in {EQ, LE, LT}

struct QF;
using QFPtr = std::shared_ptr<const QF>;

struct QF {
    enum Kind { True_, False_, Atom_, Not_, And_, Or_ } kind;
    MultiPoly p;
    Rel rel = Rel::EQ;
    std::vector<QFPtr> kids;
};

QFPtr qf_truth(bool b) {
    auto n = std::make_shared<QF>();
    n->kind = b ? QF::True_ : QF::False_;
    return n;
}

QFPtr qf_atom(MultiPoly p, Rel rel) {
    auto n = std::make_shared<QF>();
    n->kind = QF::Atom_;
    n->p = std::move(p);
    n->rel = rel;
    return n;
}

QFPtr qf_not(QFPtr a) {
    if (a->kind == QF::True_) return qf_truth(false);
    if (a->kind == QF::False_) return qf_truth(true);
    if (a->kind == QF::Not_) return a->kids[0];
    auto n = std::make_shared<QF>();
    n->kind = QF::Not_;
    n->kids = {std::move(a)};
    return n;
}

QFPtr qf_junct(QF::Kind k, std::vector<QFPtr> kids) {
    const bool is_and = k == QF::And_;
    std::vector<QFPtr> flat;
    for (auto& c : kids) {
        if (c->kind == k) flat.insert(flat.end(), c->kids.begin(), c->kids.end());
        else if (c->kind == (is_and ? QF::True_ : QF::False_)) continue;
        else if (c->kind == (is_and ? QF::False_ : QF::True_)) return qf_truth(!is_and);
        else flat.push_back(std::move(c));
    }
    if (flat.empty()) return qf_truth(is_and);
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<QF>();
    n->kind = k;
    n->kids = std::move(flat);
    return n;
}

QFPtr qf_and(std::vector<QFPtr> kids) { return qf_junct(QF::And_, std::move(kids)); }
QFPtr qf_or(std::vector<QFPtr> kids) { return qf_junct(QF::Or_, std::move(kids)); }

bool qf_depends(const QFPtr& f, int v) {
    if (f->kind == QF::Atom_) return f->p.depends_on(v);
    for (const auto& k : f->kids)
        if (qf_depends(k, v)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Sign bookkeeping

enum class CSign { Zero, Pos, Neg, NonZero };

bool sign_matches(CSign s, Rel rel, bool negated) {
    switch (rel) {
        case Rel::EQ: return negated ? s != CSign::Zero : s == CSign::Zero;
        case Rel::LE: return s == CSign::Zero || s == CSign::Neg;
        case Rel::LT: return s == CSign::Neg;
        default: break;
    }
    throw Error(ErrorCode::INTERNAL, "sign_matches: bad relation");
}

CSign flip(CSign s) {
    if (s == CSign::Pos) return CSign::Neg;
    if (s == CSign::Neg) return CSign::Pos;
    return s;
}

CSign of_sign(Sign s) {
    switch (s) {
        case Sign::NEG: return CSign::Neg;
        case Sign::ZERO: return CSign::Zero;
        case Sign::POS: return CSign::Pos;
    }
    return CSign::Zero;
}

// Orientation-normalized key: primitive part with positive leading coefficient.
std::pair<MultiPoly, bool> canon(const MultiPoly& p) {
    MultiPoly q = p.primitive_part();
    if (q.is_zero()) return {q, false};
    const Rational& lead = q.terms().rbegin()->second;
    if (lead < 0) return {-q, true};
    return {q, false};
}

struct Ctx {
    std::map<MultiPoly, CSign> signs;
};

struct Inconsistent {};

// ---------------------------------------------------------------------------
// Cohen-Hormander style elimination of one field quantifier

using Column = std::vector<CSign>;
using Matrix = std::vector<Column>;
using VPoly = std::vector<MultiPoly>; // coefficients in the eliminated variable

struct Lit {
    MultiPoly p;
    Rel rel;
    bool negated; // only for EQ
};

struct Solver {
    const QeOptions& opts;
    QeStats& stats;
    long remaining;
    int var = -1;

    void spend(long n = 1) {
        remaining -= n;
        if (remaining < 0)
            throw Error(ErrorCode::BUDGET_EXCEEDED, "elimination budget exhausted");
    }

    std::optional<CSign> findsign(const Ctx& ctx, const MultiPoly& p) const {
        if (p.is_constant())
            return of_sign(p.is_zero() ? Sign::ZERO : sign_of(p.constant_value()));
        if (opts.infinitesimal && p.vars_subset_of({GenTable::kShift}))
            return of_sign(sign_at_infinitesimal(p.to_unipoly(GenTable::kShift)));
        auto [key, swapped] = canon(p);
        auto it = ctx.signs.find(key);
        if (it == ctx.signs.end()) return std::nullopt;
        return swapped ? flip(it->second) : it->second;
    }

    Ctx assertsign(const Ctx& ctx, const MultiPoly& p, CSign s) const {
        auto [key, swapped] = canon(p);
        Ctx out = ctx;
        out.signs[key] = swapped ? flip(s) : s;
        return out;
    }

    using K = std::function<QFPtr(const Ctx&)>;

    QFPtr protect(const K& k, const Ctx& ctx) {
        try {
            return k(ctx);
        } catch (const Inconsistent&) {
            return qf_truth(false);
        }
    }

    // Branch on the sign of a parameter polynomial; each continuation runs
    // under the corresponding assumption, guarded in the output formula.
    QFPtr split3(const Ctx& ctx, const MultiPoly& c,
                 const std::function<QFPtr(const Ctx&, CSign)>& k) {
        auto known = findsign(ctx, c);
        if (known && *known != CSign::NonZero) return k(ctx, *known);
        stats.splits++;
        spend();
        std::vector<QFPtr> branches;
        auto branch = [&](CSign s, QFPtr guard) {
            QFPtr sub = protect([&](const Ctx& c2) { return k(c2, s); }, assertsign(ctx, c, s));
            branches.push_back(qf_and({std::move(guard), sub}));
        };
        if (!known) branch(CSign::Zero, qf_atom(c, Rel::EQ));
        branch(CSign::Neg, qf_atom(c, Rel::LT));
        branch(CSign::Pos, qf_atom(-c, Rel::LT));
        return qf_or(std::move(branches));
    }

    // Zero / nonzero distinction only, used for head coefficients.
    QFPtr split_zero(const Ctx& ctx, const MultiPoly& c, const K& kz, const K& knz) {
        auto known = findsign(ctx, c);
        if (known) return *known == CSign::Zero ? kz(ctx) : knz(ctx);
        stats.splits++;
        spend();
        QFPtr fz = qf_and({qf_atom(c, Rel::EQ), protect(kz, assertsign(ctx, c, CSign::Zero))});
        QFPtr fn = qf_and({qf_not(qf_atom(c, Rel::EQ)),
                           protect(knz, assertsign(ctx, c, CSign::NonZero))});
        return qf_or({fz, fn});
    }

    // --- polynomials as coefficient vectors in `var`

    static void trim(VPoly& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    }

    VPoly vp_of(const MultiPoly& p) const {
        VPoly v = p.coeffs_in(var);
        trim(v);
        return v;
    }

    MultiPoly mp_of(const VPoly& p) const { return MultiPoly::from_coeffs(p, var); }

    static int deg(const VPoly& p) { return static_cast<int>(p.size()) - 1; }

    static VPoly behead(VPoly p) {
        p.pop_back();
        trim(p);
        return p;
    }

    static VPoly vp_derivative(const VPoly& p) {
        VPoly d;
        for (size_t i = 1; i < p.size(); ++i)
            d.push_back(p[i].scaled(Rational(static_cast<long>(i))));
        trim(d);
        return d;
    }

    static VPoly vp_scale(const VPoly& p, const MultiPoly& c) {
        VPoly r;
        r.reserve(p.size());
        for (const auto& q : p) r.push_back(q * c);
        trim(r);
        return r;
    }

    static VPoly vp_sub(const VPoly& a, const VPoly& b) {
        VPoly r = a;
        if (b.size() > r.size()) r.resize(b.size());
        for (size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
        trim(r);
        return r;
    }

    static VPoly vp_shift(const VPoly& p, int k) {
        if (p.empty()) return p;
        VPoly r(p.size() + k);
        for (size_t i = 0; i < p.size(); ++i) r[i + k] = p[i];
        return r;
    }

    // b^k * s = q * divisor + r with deg r < deg divisor.
    std::pair<int, VPoly> vp_pdivide(const VPoly& s, const VPoly& q) {
        int k = 0;
        VPoly r = s;
        const MultiPoly& b = q.back();
        while (deg(r) >= deg(q)) {
            spend();
            stats.remainders++;
            int d = deg(r) - deg(q);
            MultiPoly top = r.back();
            r = vp_sub(vp_scale(r, b), vp_shift(vp_scale(q, top), d));
            ++k;
        }
        return {k, r};
    }

    // Remainder of s modulo q, adjusted so its sign agrees with s wherever q
    // vanishes, given the sign context for q's head coefficient.
    VPoly pdivide_pos(const Ctx& ctx, const VPoly& s, const VPoly& q) {
        const MultiPoly& a = q.back();
        auto [k, r] = vp_pdivide(s, q);
        auto sa = findsign(ctx, a);
        if (!sa || *sa == CSign::Zero)
            throw Error(ErrorCode::INTERNAL, "pdivide_pos: undetermined head");
        if (*sa == CSign::Pos || k % 2 == 0) return r;
        if (*sa == CSign::Neg) return vp_scale(r, MultiPoly(Rational(-1)));
        return vp_scale(r, a); // head merely nonzero: one more even power
    }

    // --- sign matrix inference

    static Column chop_infer(const Column& col, size_t l) {
        // col = signs of [p' and the qs] then of the gs; deduce p's sign at a
        // point where some q vanishes, placeholder otherwise.
        for (size_t j = 0; j < l; ++j)
            if (col[j] == CSign::Zero) {
                Column out;
                out.push_back(col[l + j]);
                out.insert(out.end(), col.begin(), col.begin() + static_cast<long>(l));
                return out;
            }
        Column out;
        out.push_back(CSign::NonZero);
        out.insert(out.end(), col.begin(), col.begin() + static_cast<long>(l));
        return out;
    }

    static Matrix condense(const Matrix& m) {
        // Columns alternate interval, point, interval, ...; drop points where
        // no tracked polynomial vanishes, merging the intervals around them.
        if (m.size() < 2) return m;
        Matrix rest(m.begin() + 2, m.end());
        rest = condense(rest);
        const Column& pt = m[1];
        bool zero = std::find(pt.begin(), pt.end(), CSign::Zero) != pt.end();
        Matrix out;
        if (zero) {
            out.push_back(m[0]);
            out.push_back(pt);
        }
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }

    static Matrix inferisign(const Matrix& m) {
        // Fill in the eliminated polynomial's sign on each interval from its
        // endpoint signs, inserting a root column on strict sign changes.
        if (m.size() < 3) return m;
        const Column& x = m[0];
        const Column& mid = m[1];
        const Column& r = m[2];
        CSign ls = x[0], rs = r[0];
        if (ls == CSign::Zero && rs == CSign::Zero) throw Inconsistent{};
        if (ls == CSign::NonZero || rs == CSign::NonZero) throw Inconsistent{};
        Column ints(mid.begin() + 1, mid.end());
        auto with = [&](CSign s) {
            Column c;
            c.push_back(s);
            c.insert(c.end(), ints.begin(), ints.end());
            return c;
        };
        Matrix rest(m.begin() + 2, m.end());
        rest = inferisign(rest);
        Matrix out;
        out.push_back(x);
        if (ls == CSign::Zero) {
            out.push_back(with(rs));
        } else if (rs == CSign::Zero || rs == ls) {
            out.push_back(with(ls));
        } else {
            out.push_back(with(ls));
            out.push_back(with(CSign::Zero));
            out.push_back(with(rs));
        }
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }

    using MCont = std::function<QFPtr(const Ctx&, const Matrix&)>;

    QFPtr dedmatrix(const Ctx& ctx, const MCont& cont, size_t idx, const Matrix& m) {
        size_t l = m.empty() ? 0 : m[0].size() / 2;
        Matrix mat1;
        mat1.reserve(m.size());
        for (const auto& col : m) mat1.push_back(chop_infer(col, l));
        mat1 = condense(mat1);
        if (mat1.empty()) return cont(ctx, {});
        // Virtual endpoints: at -oo the polynomial has the opposite sign of
        // its derivative's leftmost sign; at +oo the same sign.
        Column left{flip(mat1.front()[1])};
        Column right{mat1.back()[1]};
        Matrix mat2;
        mat2.push_back(left);
        mat2.insert(mat2.end(), mat1.begin(), mat1.end());
        mat2.push_back(right);
        Matrix mat3 = inferisign(mat2);
        mat3 = Matrix(mat3.begin() + 1, mat3.end() - 1);
        Matrix out;
        for (const auto& col : mat3) {
            // drop the derivative row, then put p back at its original slot
            Column c;
            c.push_back(col[0]);
            c.insert(c.end(), col.begin() + 2, col.end());
            Column fin(c.begin() + 1, c.end());
            fin.insert(fin.begin() + static_cast<long>(idx), c[0]);
            out.push_back(std::move(fin));
        }
        return cont(ctx, condense(out));
    }

    QFPtr casesplit(const Ctx& ctx, std::vector<VPoly> dun, std::vector<VPoly> pols,
                    const MCont& cont) {
        spend();
        if (pols.empty()) return matrix_step(ctx, std::move(dun), cont);
        VPoly p = pols.front();
        std::vector<VPoly> rest(pols.begin() + 1, pols.end());
        if (deg(p) <= 0) {
            MultiPoly c = p.empty() ? MultiPoly() : p[0];
            size_t at = dun.size();
            return split3(ctx, c, [&](const Ctx& c2, CSign s) {
                MCont cont2 = [cont, at, s](const Ctx& c3, const Matrix& m) {
                    Matrix out;
                    out.reserve(m.size());
                    for (const auto& col : m) {
                        Column c4 = col;
                        c4.insert(c4.begin() + static_cast<long>(at), s);
                        out.push_back(std::move(c4));
                    }
                    return cont(c3, out);
                };
                return casesplit(c2, dun, rest, cont2);
            });
        }
        return split_zero(
            ctx, p.back(),
            [&](const Ctx& c2) {
                std::vector<VPoly> pols2;
                pols2.push_back(behead(p));
                pols2.insert(pols2.end(), rest.begin(), rest.end());
                return casesplit(c2, dun, pols2, cont);
            },
            [&](const Ctx& c2) {
                std::vector<VPoly> dun2 = dun;
                dun2.push_back(p);
                return casesplit(c2, dun2, rest, cont);
            });
    }

    QFPtr matrix_step(const Ctx& ctx, std::vector<VPoly> pols, const MCont& cont) {
        if (pols.empty()) return protect([&](const Ctx& c2) { return cont(c2, {Column{}}); }, ctx);
        size_t i = 0;
        for (size_t j = 1; j < pols.size(); ++j)
            if (deg(pols[j]) > deg(pols[i])) i = j;
        VPoly p = pols[i];
        std::vector<VPoly> qs;
        qs.push_back(vp_derivative(p));
        for (size_t j = 0; j < pols.size(); ++j)
            if (j != i) qs.push_back(pols[j]);
        std::vector<VPoly> gs;
        for (const auto& q : qs) {
            if (deg(q) <= 0) gs.push_back(VPoly{}); // constant: no roots to sign
            else gs.push_back(pdivide_pos(ctx, p, q));
        }
        std::vector<VPoly> all = qs;
        all.insert(all.end(), gs.begin(), gs.end());
        MCont cont2 = [this, cont, i](const Ctx& c2, const Matrix& m) {
            return dedmatrix(c2, cont, i, m);
        };
        return casesplit(ctx, {}, all, cont2);
    }

    // Eliminate exists(var) over a conjunction of literals, all depending on var.
    QFPtr ch_exists(const std::vector<Lit>& lits) {
        std::vector<VPoly> pols;
        std::vector<size_t> index; // literal -> polynomial row
        for (const auto& lit : lits) {
            VPoly vp = vp_of(lit.p);
            size_t at = pols.size();
            for (size_t j = 0; j < pols.size(); ++j)
                if (pols[j] == vp) { at = j; break; }
            if (at == pols.size()) pols.push_back(vp);
            index.push_back(at);
        }
        MCont cont = [&lits, &index](const Ctx&, const Matrix& m) -> QFPtr {
            for (const auto& col : m) {
                bool ok = true;
                for (size_t li = 0; li < lits.size(); ++li)
                    if (!sign_matches(col[index[li]], lits[li].rel, lits[li].negated)) {
                        ok = false;
                        break;
                    }
                if (ok) return qf_truth(true);
            }
            return qf_truth(false);
        };
        Ctx ctx;
        return protect([&](const Ctx& c2) { return casesplit(c2, {}, pols, cont); }, ctx);
    }

    // Sign-matrix elimination over an arbitrary NNF body: every atom free of
    // the variable stays symbolic, every atom mentioning it is read off the
    // column, and the existential becomes the disjunction over columns of the
    // partially evaluated body. Avoids the disjunctive normal form entirely.
    QFPtr ch_formula(const QFPtr& n) {
        std::vector<VPoly> pols;
        std::map<std::string, size_t> row;
        auto key_of = [](const MultiPoly& p) {
            auto vs = p.variables();
            int hi = vs.empty() ? -1 : *vs.rbegin();
            std::vector<std::string> names;
            for (int i = 0; i <= hi; ++i) names.push_back("g" + std::to_string(i));
            return p.to_string(names);
        };
        std::function<void(const QFPtr&)> collect = [&](const QFPtr& f) {
            if (f->kind == QF::Atom_) {
                if (!f->p.depends_on(var)) return;
                std::string key = key_of(f->p);
                if (row.count(key)) return;
                VPoly vp = vp_of(f->p);
                size_t at = pols.size();
                for (size_t j = 0; j < pols.size(); ++j)
                    if (pols[j] == vp) { at = j; break; }
                if (at == pols.size()) pols.push_back(vp);
                row[key] = at;
            } else {
                for (const auto& k : f->kids) collect(k);
            }
        };
        collect(n);
        if (pols.empty()) return n;
        std::function<QFPtr(const QFPtr&, const Column&)> eval_col =
            [&](const QFPtr& f, const Column& col) -> QFPtr {
            switch (f->kind) {
                case QF::True_:
                case QF::False_: return f;
                case QF::Atom_: {
                    if (!f->p.depends_on(var)) return f;
                    return qf_truth(
                        sign_matches(col[row.at(key_of(f->p))], f->rel, false));
                }
                case QF::Not_: return qf_not(eval_col(f->kids[0], col));
                case QF::And_:
                case QF::Or_: {
                    std::vector<QFPtr> kids;
                    for (const auto& k : f->kids) kids.push_back(eval_col(k, col));
                    return qf_junct(f->kind, std::move(kids));
                }
            }
            throw Error(ErrorCode::INTERNAL, "eval_col: bad kind");
        };
        MCont cont = [&](const Ctx&, const Matrix& m) -> QFPtr {
            std::vector<QFPtr> cols;
            for (const auto& col : m) cols.push_back(eval_col(n, col));
            return qf_or(std::move(cols));
        };
        Ctx ctx;
        return protect([&](const Ctx& c2) { return casesplit(c2, {}, pols, cont); }, ctx);
    }
};

// ---------------------------------------------------------------------------
// Simplification and normal forms

struct Shape {
    const QeOptions& opts;

    std::optional<bool> ground_truth(const MultiPoly& p, Rel rel, bool negated) const {
        std::optional<Sign> s;
        if (p.is_constant()) s = p.is_zero() ? Sign::ZERO : sign_of(p.constant_value());
        else if (opts.infinitesimal && p.vars_subset_of({GenTable::kShift}))
            s = sign_at_infinitesimal(p.to_unipoly(GenTable::kShift));
        if (!s) return std::nullopt;
        return sign_matches(of_sign(*s), rel, negated);
    }

    // X (the infinitesimal) is a positive constant of the intended model, so a
    // common factor X^k in an atom's polynomial never changes the verdict.
    MultiPoly strip_shift(const MultiPoly& p) const {
        if (!opts.infinitesimal || !p.depends_on(GenTable::kShift)) return p;
        std::vector<MultiPoly> cs = p.coeffs_in(GenTable::kShift);
        size_t k = 0;
        while (k < cs.size() && cs[k].is_zero()) ++k;
        if (k == 0 || k >= cs.size()) return p;
        return MultiPoly::from_coeffs(
            std::vector<MultiPoly>(cs.begin() + static_cast<long>(k), cs.end()),
            GenTable::kShift);
    }

    QFPtr simplify(const QFPtr& f) const {
        switch (f->kind) {
            case QF::True_:
            case QF::False_: return f;
            case QF::Atom_: {
                auto g = ground_truth(f->p, f->rel, false);
                if (g) return qf_truth(*g);
                MultiPoly q = strip_shift(f->p);
                if (f->rel == Rel::EQ) {
                    auto [key, _] = canon(q);
                    return qf_atom(key, Rel::EQ);
                }
                return qf_atom(q.primitive_part(), f->rel);
            }
            case QF::Not_: return qf_not(simplify(f->kids[0]));
            case QF::And_:
            case QF::Or_: {
                std::vector<QFPtr> kids;
                std::set<std::string> seen;
                for (const auto& k : f->kids) {
                    QFPtr s = simplify(k);
                    std::string key = qf_key(s);
                    if (seen.insert(key).second) kids.push_back(std::move(s));
                }
                if (prune_complements(f->kind, kids))
                    return qf_truth(f->kind == QF::Or_);
                return qf_junct(f->kind, std::move(kids));
            }
        }
        throw Error(ErrorCode::INTERNAL, "simplify: bad kind");
    }

    // True when the sibling literals decide the junction outright: a disjunct
    // covering the whole line (e.g. q <= 0 \/ -q < 0) makes an Or true, a
    // conjunct pair with empty intersection (e.g. q = 0 /\ q < 0) makes an
    // And false.
    bool prune_complements(int kind, const std::vector<QFPtr>& kids) const {
        struct Info {
            bool eq = false, neq = false, ltp = false, ltn = false, lep = false, len = false;
        };
        std::map<std::string, Info> seen;
        bool is_or = kind == QF::Or_;
        for (const auto& kid : kids) {
            const QF* at = nullptr;
            bool neg = false;
            if (kid->kind == QF::Atom_) at = kid.get();
            else if (kid->kind == QF::Not_ && kid->kids[0]->kind == QF::Atom_) {
                at = kid->kids[0].get();
                neg = true;
            }
            if (!at) continue;
            auto [key, swapped] = canon(at->p);
            Info& in = seen[qf_key(qf_atom(key, Rel::EQ))];
            if (at->rel == Rel::EQ) (neg ? in.neq : in.eq) = true;
            else if (neg) continue; // NNF leaves no negated order atoms
            else if (at->rel == Rel::LT) (swapped ? in.ltn : in.ltp) = true;
            else (swapped ? in.len : in.lep) = true;
            bool full_line = (in.eq && in.neq) || (in.lep && in.len) || (in.lep && in.ltn) ||
                             (in.ltp && in.len) || (in.eq && in.ltp && in.ltn);
            bool empty_meet = (in.eq && in.neq) || (in.eq && in.ltp) || (in.eq && in.ltn) ||
                              (in.ltp && in.ltn) || (in.ltp && in.len) || (in.lep && in.ltn);
            if (is_or ? full_line : empty_meet) return true;
        }
        return false;
    }

    static std::string qf_key(const QFPtr& f) {
        switch (f->kind) {
            case QF::True_: return "T";
            case QF::False_: return "F";
            case QF::Atom_: {
                static const std::vector<std::string> none;
                std::vector<std::string> names;
                auto vs = f->p.variables();
                int hi = vs.empty() ? -1 : *vs.rbegin();
                for (int i = 0; i <= hi; ++i) names.push_back("g" + std::to_string(i));
                return (f->rel == Rel::EQ ? "=" : f->rel == Rel::LE ? "<=" : "<") +
                       f->p.to_string(names);
            }
            case QF::Not_: return "!(" + qf_key(f->kids[0]) + ")";
            case QF::And_:
            case QF::Or_: {
                std::string s = f->kind == QF::And_ ? "&(" : "|(";
                for (const auto& k : f->kids) s += qf_key(k) + ",";
                return s + ")";
            }
        }
        return "?";
    }
};

// Negation normal form with literal polarity pushed into Lit-style atoms.
QFPtr nnf(const QFPtr& f, bool neg) {
    switch (f->kind) {
        case QF::True_: return qf_truth(!neg);
        case QF::False_: return qf_truth(neg);
        case QF::Atom_: {
            if (!neg) return f;
            switch (f->rel) {
                case Rel::EQ: return qf_not(f);
                case Rel::LE: return qf_atom(-f->p, Rel::LT); // !(p<=0)  <=>  -p<0
                case Rel::LT: return qf_atom(-f->p, Rel::LE);
                default: break;
            }
            throw Error(ErrorCode::INTERNAL, "nnf: bad relation");
        }
        case QF::Not_: return nnf(f->kids[0], !neg);
        case QF::And_:
        case QF::Or_: {
            std::vector<QFPtr> kids;
            for (const auto& k : f->kids) kids.push_back(nnf(k, neg));
            bool conj = (f->kind == QF::And_) != neg;
            return qf_junct(conj ? QF::And_ : QF::Or_, std::move(kids));
        }
    }
    throw Error(ErrorCode::INTERNAL, "nnf: bad kind");
}

Lit lit_of(const QFPtr& f) {
    if (f->kind == QF::Atom_) return {f->p, f->rel, false};
    if (f->kind == QF::Not_ && f->kids[0]->kind == QF::Atom_ && f->kids[0]->rel == Rel::EQ)
        return {f->kids[0]->p, Rel::EQ, true};
    throw Error(ErrorCode::INTERNAL, "not a literal");
}

bool is_literal(const QFPtr& f) {
    return f->kind == QF::Atom_ ||
           (f->kind == QF::Not_ && f->kids[0]->kind == QF::Atom_);
}

// Disjunctive normal form of an NNF input, as lists of literals. Returns
// false (a signal to fall back to whole-formula elimination) past `limit`
// cells.
bool dnf(const QFPtr& f, std::vector<std::vector<QFPtr>>& out, long limit) {
    switch (f->kind) {
        case QF::True_: out.push_back({}); return true;
        case QF::False_: return true;
        case QF::Atom_:
        case QF::Not_: out.push_back({f}); return true;
        case QF::Or_: {
            for (const auto& k : f->kids)
                if (!dnf(k, out, limit)) return false;
            return static_cast<long>(out.size()) <= limit;
        }
        case QF::And_: {
            std::vector<std::vector<QFPtr>> acc{{}};
            for (const auto& k : f->kids) {
                std::vector<std::vector<QFPtr>> part;
                if (!dnf(k, part, limit)) return false;
                std::vector<std::vector<QFPtr>> next;
                for (const auto& a : acc)
                    for (const auto& b : part) {
                        std::vector<QFPtr> row = a;
                        row.insert(row.end(), b.begin(), b.end());
                        next.push_back(std::move(row));
                        if (static_cast<long>(next.size()) > limit) return false;
                    }
                acc = std::move(next);
            }
            out.insert(out.end(), acc.begin(), acc.end());
            return true;
        }
    }
    throw Error(ErrorCode::INTERNAL, "dnf: bad kind");
}

// ---------------------------------------------------------------------------
// Formula <-> internal conversion

QFPtr to_qf(const FormulaPtr& f, GenTable& gens) {
    switch (f->kind) {
        case FKind::True: return qf_truth(true);
        case FKind::False: return qf_truth(false);
        case FKind::Atomic: {
            if (f->atom.rel == Rel::DIVIDES)
                throw Error(ErrorCode::UNSUPPORTED_FRAGMENT,
                            "divisibility atom reached the elimination core");
            MultiPoly p = term_to_poly(f->atom.lhs, gens, false) -
                          term_to_poly(f->atom.rhs, gens, false);
            return qf_atom(std::move(p), f->atom.rel);
        }
        case FKind::Not: return qf_not(to_qf(f->a, gens));
        case FKind::And: return qf_and({to_qf(f->a, gens), to_qf(f->b, gens)});
        case FKind::Or: return qf_or({to_qf(f->a, gens), to_qf(f->b, gens)});
        case FKind::Implies: return qf_or({qf_not(to_qf(f->a, gens)), to_qf(f->b, gens)});
        case FKind::Iff: {
            QFPtr a = to_qf(f->a, gens), b = to_qf(f->b, gens);
            return qf_and({qf_or({qf_not(a), b}), qf_or({qf_not(b), a})});
        }
        case FKind::Forall:
        case FKind::Exists:
            throw Error(ErrorCode::INTERNAL, "quantifier inside matrix");
    }
    throw Error(ErrorCode::INTERNAL, "to_qf: bad kind");
}

FormulaPtr from_qf(const QFPtr& f, const GenTable& gens) {
    switch (f->kind) {
        case QF::True_: return Formula::truth(true);
        case QF::False_: return Formula::truth(false);
        case QF::Atom_:
            return Formula::atomic(poly_to_term(f->p, gens), f->rel,
                                   Term::rat_const(Rational(0)));
        case QF::Not_: return Formula::negation(from_qf(f->kids[0], gens));
        case QF::And_:
        case QF::Or_: {
            FormulaPtr acc;
            for (const auto& k : f->kids) {
                FormulaPtr g = from_qf(k, gens);
                if (!acc) acc = g;
                else acc = f->kind == QF::And_ ? Formula::conj(acc, g) : Formula::disj(acc, g);
            }
            return acc ? acc : Formula::truth(f->kind == QF::And_);
        }
    }
    throw Error(ErrorCode::INTERNAL, "from_qf: bad kind");
}

struct PrefixEntry {
    bool forall;
    int v; // generator index
};

// Strip the quantifier prefix of a prenex formula.
QFPtr strip_prefix(const FormulaPtr& f, GenTable& gens, std::vector<PrefixEntry>& prefix) {
    if (f->kind == FKind::Forall || f->kind == FKind::Exists) {
        int v = gens.intern_var(f->var);
        prefix.push_back({f->kind == FKind::Forall, v});
        return strip_prefix(f->a, gens, prefix);
    }
    return to_qf(f, gens);
}

// ---------------------------------------------------------------------------
// Linear presolve

// p with v := num/den, denominators cleared; order atoms keep their sign by
// an extra factor of den when the degree is odd.
MultiPoly subst_rational(const MultiPoly& p, int v, const MultiPoly& num, const MultiPoly& den,
                         Rel rel) {
    std::vector<MultiPoly> cs = p.coeffs_in(v);
    int d = static_cast<int>(cs.size()) - 1;
    MultiPoly out;
    MultiPoly np(Rational(1));
    for (int i = 0; i <= d; ++i) {
        MultiPoly dp(Rational(1));
        for (int j = 0; j < d - i; ++j) dp = dp * den;
        out = out + cs[i] * np * dp;
        np = np * num;
    }
    if (rel != Rel::EQ && d % 2 == 1) out = out * den;
    return out;
}

QFPtr qf_subst(const QFPtr& f, int v, const MultiPoly& num, const MultiPoly& den) {
    switch (f->kind) {
        case QF::True_:
        case QF::False_: return f;
        case QF::Atom_: return qf_atom(subst_rational(f->p, v, num, den, f->rel), f->rel);
        case QF::Not_: return qf_not(qf_subst(f->kids[0], v, num, den));
        case QF::And_:
        case QF::Or_: {
            std::vector<QFPtr> kids;
            for (const auto& k : f->kids) kids.push_back(qf_subst(k, v, num, den));
            return qf_junct(f->kind, std::move(kids));
        }
    }
    throw Error(ErrorCode::INTERNAL, "qf_subst: bad kind");
}

struct SolvedVar {
    MultiPoly num, den;
};

// An invertible linear solution for v from literal `lit` of the right
// polarity, usable only when it mentions no variable bound at or inside v's
// prefix position.
std::optional<SolvedVar> solve_linear(const QFPtr& lit, bool want_negated, int v,
                                      const std::set<int>& forbidden, const QeOptions& opts) {
    if (!is_literal(lit)) return std::nullopt;
    Lit l = lit_of(lit);
    if (l.rel != Rel::EQ || l.negated != want_negated) return std::nullopt;
    if (l.p.degree_in(v) != 1) return std::nullopt;
    std::vector<MultiPoly> cs = l.p.coeffs_in(v);
    const MultiPoly& a = cs[1];
    MultiPoly r = cs.empty() ? MultiPoly() : cs[0];
    bool invertible = false;
    if (a.is_constant()) invertible = !a.is_zero();
    else if (opts.infinitesimal && a.vars_subset_of({GenTable::kShift}))
        invertible = sign_at_infinitesimal(a.to_unipoly(GenTable::kShift)) != Sign::ZERO;
    if (!invertible) return std::nullopt;
    std::set<int> used = l.p.variables();
    for (int u : used)
        if (u != v && forbidden.count(u)) return std::nullopt;
    return SolvedVar{-r, a};
}

void presolve_pass(std::vector<PrefixEntry>& prefix, QFPtr& m, const QeOptions& opts,
                   QeStats& stats) {
    bool changed = true;
    while (changed) {
        changed = false;
        m = nnf(m, false);
        for (size_t i = 0; i < prefix.size(); ++i) {
            int v = prefix[i].v;
            std::set<int> forbidden;
            for (size_t j = i; j < prefix.size(); ++j) forbidden.insert(prefix[j].v);
            std::vector<QFPtr> tops;
            if (prefix[i].forall) {
                if (m->kind == QF::Or_) tops = m->kids;
                else tops = {m};
            } else {
                if (m->kind == QF::And_) tops = m->kids;
                else tops = {m};
            }
            std::optional<SolvedVar> sol;
            for (const auto& t : tops) {
                sol = solve_linear(t, prefix[i].forall, v, forbidden, opts);
                if (sol) break;
            }
            if (!sol) continue;
            m = qf_subst(m, v, sol->num, sol->den);
            m = Shape{opts}.simplify(m);
            prefix.erase(prefix.begin() + static_cast<long>(i));
            stats.presolved++;
            changed = true;
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Driver

// One conjunctive cell of an existential. A literal c*v + d = 0 lets us
// substitute v := -d/c instead of running the sign-matrix search:
//   exists v (c*v + d = 0 /\ R)  <=>  (c != 0 /\ R[-d/c]) \/ (c = 0 /\ d = 0 /\ exists v R)
// The degenerate branch drops when c's sign is already decided.
QFPtr elim_cell(int v, const std::vector<Lit>& bound, Solver& solver, const QeOptions& opts) {
    for (size_t i = 0; i < bound.size(); ++i) {
        const Lit& l = bound[i];
        if (l.rel != Rel::EQ || l.negated || l.p.degree_in(v) != 1) continue;
        std::vector<MultiPoly> cs = l.p.coeffs_in(v);
        MultiPoly c = cs[1];
        MultiPoly d = cs.empty() ? MultiPoly() : cs[0];
        if (c.depends_on(v) || d.depends_on(v)) continue;
        bool decided = c.is_constant();
        if (!decided && opts.infinitesimal && c.vars_subset_of({GenTable::kShift}))
            decided = sign_at_infinitesimal(c.to_unipoly(GenTable::kShift)) != Sign::ZERO;
        std::vector<QFPtr> subst;
        if (!decided) subst.push_back(qf_not(qf_atom(c, Rel::EQ)));
        std::vector<Lit> rest;
        for (size_t j = 0; j < bound.size(); ++j) {
            if (j == i) continue;
            rest.push_back(bound[j]);
            solver.spend();
            QFPtr at = qf_atom(subst_rational(bound[j].p, v, -d, c, bound[j].rel), bound[j].rel);
            subst.push_back(bound[j].negated ? qf_not(at) : at);
        }
        QFPtr direct = qf_and(std::move(subst));
        if (decided) return direct;
        QFPtr degenerate =
            qf_and({qf_atom(c, Rel::EQ), qf_atom(d, Rel::EQ),
                    rest.empty() ? qf_truth(true) : elim_cell(v, rest, solver, opts)});
        return qf_or({direct, degenerate});
    }
    return solver.ch_exists(bound);
}

QFPtr elim_exists(int v, const QFPtr& body, Solver& solver, const QeOptions& opts,
                  QeStats& stats) {
    if (!qf_depends(body, v)) return body;
    QFPtr n = nnf(body, false);
    std::vector<std::vector<QFPtr>> cells;
    if (!dnf(n, cells, std::max<long>(64, solver.remaining / 64))) {
        solver.var = v;
        return solver.ch_formula(n);
    }
    std::vector<QFPtr> out;
    for (const auto& cell : cells) {
        stats.disjuncts++;
        std::vector<QFPtr> free_part;
        std::vector<Lit> bound;
        for (const auto& lit : cell) {
            Lit l = lit_of(lit);
            if (l.p.depends_on(v)) bound.push_back(std::move(l));
            else free_part.push_back(lit);
        }
        solver.var = v;
        QFPtr inner = bound.empty() ? qf_truth(true) : elim_cell(v, bound, solver, opts);
        free_part.push_back(inner);
        out.push_back(qf_and(std::move(free_part)));
    }
    return qf_or(std::move(out));
}

FormulaPtr eliminate_impl(const FormulaPtr& f, const QeOptions& opts, QeStats& stats,
                          GenTable& gens, QFPtr* qf_out) {
    FormulaPtr pn = prenex(desugar_iff(f));
    std::vector<PrefixEntry> prefix;
    QFPtr m = strip_prefix(pn, gens, prefix);
    Shape sh{opts};
    m = sh.simplify(m);
    if (opts.presolve) presolve_pass(prefix, m, opts, stats);
    Solver solver{opts, stats, opts.budget};
    for (size_t i = prefix.size(); i-- > 0;) {
        const PrefixEntry& q = prefix[i];
        if (opts.trace)
            std::fprintf(stderr, "[qe] %s %s: %ld budget left\n",
                         q.forall ? "forall" : "exists",
                         term_to_string(gens.term_of(q.v)).c_str(), solver.remaining);
        if (q.forall)
            m = qf_not(elim_exists(q.v, nnf(qf_not(m), false), solver, opts, stats));
        else
            m = elim_exists(q.v, m, solver, opts, stats);
        m = sh.simplify(nnf(m, false));
    }
    if (qf_out) *qf_out = m;
    return from_qf(m, gens);
}

} // namespace

bool evaluate_qf(const FormulaPtr& f) {
    GenTable gens;
    QFPtr m = to_qf(f, gens); // throws on quantifiers via INTERNAL; check first
    std::function<bool(const QFPtr&)> ev = [&](const QFPtr& g) -> bool {
        switch (g->kind) {
            case QF::True_: return true;
            case QF::False_: return false;
            case QF::Atom_: {
                if (!g->p.vars_subset_of({GenTable::kShift}))
                    throw Error(ErrorCode::NOT_GROUND,
                                "free variable in quantifier-free evaluation");
                Sign s = sign_at_infinitesimal(g->p.to_unipoly(GenTable::kShift));
                return sign_matches(of_sign(s), g->rel, false);
            }
            case QF::Not_: return !ev(g->kids[0]);
            case QF::And_:
                for (const auto& k : g->kids)
                    if (!ev(k)) return false;
                return true;
            case QF::Or_:
                for (const auto& k : g->kids)
                    if (ev(k)) return true;
                return false;
        }
        throw Error(ErrorCode::INTERNAL, "evaluate_qf: bad kind");
    };
    return ev(m);
}

namespace {

// The sign-matrix core is continuation-passing and can nest tens of
// thousands of frames on large inputs; give it room well beyond the
// default thread stack so the work budget, not the stack, is the limit.
void run_with_big_stack(const std::function<void()>& fn) {
    constexpr size_t kStackBytes = 512u * 1024 * 1024;
    pthread_attr_t attr;
    if (pthread_attr_init(&attr) != 0 ||
        pthread_attr_setstacksize(&attr, kStackBytes) != 0) {
        fn();
        return;
    }
    struct Shim {
        const std::function<void()>* fn;
        std::exception_ptr err;
    } shim{&fn, nullptr};
    auto entry = [](void* p) -> void* {
        auto* s = static_cast<Shim*>(p);
        try {
            (*s->fn)();
        } catch (...) {
            s->err = std::current_exception();
        }
        return nullptr;
    };
    pthread_t tid;
    if (pthread_create(&tid, &attr, entry, &shim) != 0) {
        pthread_attr_destroy(&attr);
        fn();
        return;
    }
    pthread_join(tid, nullptr);
    pthread_attr_destroy(&attr);
    if (shim.err) std::rethrow_exception(shim.err);
}

} // namespace

FormulaPtr eliminate(const FormulaPtr& f, const QeOptions& opts, QeStats* stats) {
    QeStats local;
    GenTable gens;
    FormulaPtr out;
    run_with_big_stack(
        [&] { out = eliminate_impl(f, opts, stats ? *stats : local, gens, nullptr); });
    return out;
}

FormulaPtr linear_presolve(const FormulaPtr& f, const QeOptions& opts, QeStats* stats) {
    QeStats local;
    QeStats& st = stats ? *stats : local;
    GenTable gens;
    std::vector<PrefixEntry> prefix;
    QFPtr m = strip_prefix(f, gens, prefix);
    m = Shape{opts}.simplify(m);
    presolve_pass(prefix, m, opts, st);
    FormulaPtr out = from_qf(m, gens);
    for (size_t i = prefix.size(); i-- > 0;) {
        const std::string& name = gens.term_of(prefix[i].v)->name;
        out = prefix[i].forall ? Formula::forall(name, Sort::L, out)
                               : Formula::exists(name, Sort::L, out);
    }
    return out;
}

// Fold relativization guards before prenexing: over a real-closed field,
// "exists w. w*w = t /\ rest" with w occurring nowhere else is "t >= 0 /\
// rest". Skipping the witness quantifier keeps it from being hoisted across
// the whole prefix, which is expensive to eliminate for no information.
FormulaPtr fold_square_witness(const FormulaPtr& f) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False:
        case FKind::Atomic: return f;
        case FKind::Not: return Formula::negation(fold_square_witness(f->a));
        case FKind::And:
            return Formula::conj(fold_square_witness(f->a), fold_square_witness(f->b));
        case FKind::Or:
            return Formula::disj(fold_square_witness(f->a), fold_square_witness(f->b));
        case FKind::Implies:
            return Formula::implies(fold_square_witness(f->a), fold_square_witness(f->b));
        case FKind::Iff:
            return Formula::iff(fold_square_witness(f->a), fold_square_witness(f->b));
        case FKind::Forall:
            return Formula::forall(f->var, f->sort, fold_square_witness(f->a));
        case FKind::Exists: {
            FormulaPtr body = fold_square_witness(f->a);
            if (body->kind == FKind::And) {
                const FormulaPtr& eq = body->a;
                const FormulaPtr& rest = body->b;
                if (eq->kind == FKind::Atomic && eq->atom.rel == Rel::EQ) {
                    const TermPtr& sq = eq->atom.lhs;
                    if (sq->kind == TermKind::Mul && sq->a->kind == TermKind::Var &&
                        sq->b->kind == TermKind::Var && sq->a->name == f->var &&
                        sq->b->name == f->var && !term_vars(eq->atom.rhs).count(f->var) &&
                        !free_vars(rest).count(f->var)) {
                        FormulaPtr nonneg = Formula::atomic(Term::rat_const(Rational(0)),
                                                            Rel::LE, eq->atom.rhs);
                        return Formula::conj(nonneg, rest);
                    }
                }
            }
            return Formula::exists(f->var, f->sort, body);
        }
    }
    throw Error(ErrorCode::INTERNAL, "fold_square_witness: bad kind");
}

Decision decide(const FormulaPtr& f, QeOptions opts) {
    opts.infinitesimal = true;
    Decision d;
    FormulaPtr g = desugar_iff(f);
    g = expand_divides(g);
    g = expand_constants(g);
    auto [noh, report] = eliminate_hd_tl(g);
    d.expansion = report;
    if (!report.complete())
        throw Error(ErrorCode::UNSUPPORTED_FRAGMENT,
                    "hd/tl not eliminable: " + report.residual.front());
    g = expand_constants(noh);
    if (!free_vars(g).empty())
        throw Error(ErrorCode::NOT_GROUND,
                    "decide requires a sentence; free: " + *free_vars(g).begin());
    g = fold_square_witness(relativize(g));
    GenTable gens;
    QFPtr m;
    run_with_big_stack([&] { eliminate_impl(g, opts, d.stats, gens, &m); });
    FormulaPtr qf = from_qf(m, gens);
    d.valid = evaluate_qf(qf);
    return d;
}

} // namespace streamlogic
