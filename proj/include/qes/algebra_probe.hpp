#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qes/monomial_spaces.hpp"
#include "qes/sturm.hpp"

namespace qes {

// Polynomial fits in a diagonal generator.

struct PolyFit {
    bool ok = false;
    /// c_0..c_d with A = sum c_k J0^k on the space.
    std::vector<ParamScalar> coefficients;
    int max_deg = 0;
    std::optional<Witness> witness;
    std::vector<std::string> warnings;
    /// The fit also holds as an identity of canonical operators.
    bool canonical = false;
};

namespace detail {

/// Eigenvalue of a diagonal operator on x^e; throws if op moves x^e.
inline ParamScalar diagonal_entry(const DiffOp &op, const V1Space &s, const QuasiExponent &e) {
    const QuasiPoly img = act_on(op, s, e);
    const QuasiExponent self = s.specialized() ? QuasiExponent(e.offset + e.a_part * *s.a_value()) : e;
    for (const auto &[out, c] : img.terms())
        if (!(out == self)) throw PreconditionViolation("J0 is not diagonal on " + s.to_string() + " at x^(" + e.to_string() + ")");
    return img.coefficient(self);
}

inline ParamScalar evaluate_fit(const std::vector<ParamScalar> &c, const ParamScalar &lambda) {
    ParamScalar v(0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * lambda + *it;
    return v;
}

inline PolyFit fit_once(const DiffOp &A, const DiffOp &J0, const V1Space &s, int max_deg) {
    PolyFit fit;
    fit.max_deg = max_deg;
    const std::size_t cols = static_cast<std::size_t>(max_deg) + 1;
    Matrix<ParamScalar> rows;
    Vec<ParamScalar> rhs;
    std::vector<ParamScalar> current(cols, ParamScalar(0));
    for (const auto &e : s.basis()) {
        const ParamScalar lambda = diagonal_entry(J0, s, e);
        const QuasiExponent self = s.specialized() ? QuasiExponent(e.offset + e.a_part * *s.a_value()) : e;
        const QuasiPoly img = act_on(A, s, e);
        for (const auto &[out, c] : img.terms()) {
            if (out == self) continue;
            fit.witness = Witness{e.to_string(), out.to_string(), c};
            return fit;
        }
        const ParamScalar mu = img.coefficient(self);
        Vec<ParamScalar> row;
        ParamScalar pw(1);
        for (std::size_t k = 0; k < cols; ++k, pw *= lambda) row.push_back(pw);
        rows.push_back(std::move(row));
        rhs.push_back(mu);
        // Greedy: the first basis vector the running solution cannot absorb is the witness.
        if (evaluate_fit(current, lambda) == mu) continue;
        auto sol = solve(rows, rhs, cols);
        if (!sol) {
            fit.witness = Witness{e.to_string(), e.to_string(), mu - evaluate_fit(current, lambda)};
            return fit;
        }
        current = std::move(*sol);
    }
    fit.ok = true;
    fit.coefficients = std::move(current);
    DiffOp poly, pw = DiffOp::identity();
    for (std::size_t k = 0; k < cols; ++k, pw = pw * J0)
        if (!fit.coefficients[k].is_zero()) poly += pw.scaled(RatFunc(fit.coefficients[k]));
    fit.canonical = !s.specialized() && poly == A;
    return fit;
}

} // namespace detail

/// Exact coefficients c_k with A = sum_{k <= max_deg} c_k J0^k on every basis
/// vector of s. Free coefficients are taken from the top degrees and set to 0.
/// With auto_raise the degree grows (with a warning) until the fit succeeds or
/// reaches dim(s) - 1, where interpolation through distinct eigenvalues can
/// no longer fail for a diagonal A.
inline PolyFit fit_poly_in_J0(const DiffOp &A, const DiffOp &J0, const V1Space &s, int max_deg = 3, bool auto_raise = false) {
    if (max_deg < 0) throw PreconditionViolation("max_deg must be nonnegative");
    PolyFit fit = detail::fit_once(A, J0, s, max_deg);
    const int cap = static_cast<int>(s.basis().size()) - 1;
    std::vector<std::string> warnings;
    int deg = max_deg;
    while (!fit.ok && auto_raise && deg < cap && fit.witness && fit.witness->basis == fit.witness->output) {
        ++deg;
        warnings.push_back("degree " + std::to_string(deg - 1) + " fit failed; raised to " + std::to_string(deg));
        fit = detail::fit_once(A, J0, s, deg);
    }
    fit.warnings = std::move(warnings);
    return fit;
}

// Relations between operator expressions.

enum class Scope { on_space, canonical };

struct RelationVerdict {
    bool holds = false;
    /// Canonical-form equality, attempted in both scopes.
    bool canonical = false;
    std::optional<Witness> witness;
};

inline RelationVerdict verify_relation(const DiffOp &lhs, const DiffOp &rhs, const V1Space &s, Scope scope) {
    RelationVerdict v;
    v.canonical = lhs == rhs;
    if (scope == Scope::canonical) {
        v.holds = v.canonical;
        if (!v.holds) {
            if (!(lhs.shift() == rhs.shift())) {
                v.witness = Witness{"prefactor", "x^(" + (ParamScalar(lhs.shift() - rhs.shift()) * param_a()).to_string() + ")",
                                    ParamScalar(1)};
                return v;
            }
            DiffOp diff = lhs - rhs;
            const auto &[j, c] = *diff.terms().rbegin();
            v.witness = Witness{"d^" + std::to_string(j), c.to_string(), c.numerator().leading()};
        }
        return v;
    }
    for (const auto &e : s.basis()) {
        const QuasiPoly diff = act_on(lhs, s, e) - act_on(rhs, s, e);
        if (diff.is_zero()) continue;
        const auto &[out, c] = *diff.terms().begin();
        v.witness = Witness{e.to_string(), out.to_string(), c};
        return v;
    }
    v.holds = true;
    return v;
}

struct NilpotencyReport {
    bool verdict = true;
    /// (i, j, witness) for products ops[i] * ops[j] that survive.
    std::vector<std::tuple<std::size_t, std::size_t, Witness>> witnesses;
};

/// ops[i] * ops[j] must annihilate every basis vector, for all i and j.
inline NilpotencyReport nilpotency_check(const std::vector<DiffOp> &ops, const V1Space &s) {
    NilpotencyReport rep;
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = 0; j < ops.size(); ++j)
            for (const auto &e : s.basis()) {
                const QuasiPoly inner = act_on(ops[j], s, e);
                QuasiPoly out;
                for (const auto &[f, c] : inner.terms()) out += act_on(ops[i], s, f).scaled(c);
                if (out.is_zero()) continue;
                const auto &[f, c] = *out.terms().begin();
                rep.witnesses.emplace_back(i, j, Witness{e.to_string(), f.to_string(), c});
                rep.verdict = false;
                break;
            }
    return rep;
}

// Commutator tables.

/// Coordinates of an operator in some fixed linear parametrization.
using Coordinates = std::map<std::string, ParamScalar>;

struct TableEntry {
    std::size_t i = 0, j = 0;
    bool inside = false;
    /// [g_i, g_j] = sum_k coefficients[k] g_k when inside.
    std::vector<ParamScalar> coefficients;
    /// Printed commutator and an uncovered coordinate when outside.
    std::string residual;
    std::string residual_key;
};

struct KillingForm {
    Matrix<ParamScalar> matrix;
    /// (positive, negative, zero) eigenvalue counts; empty if the form depends on a.
    std::optional<std::array<int, 3>> signature;
    /// Signatures at sample values of a when the form depends on a.
    std::vector<std::pair<Rational, std::array<int, 3>>> samples;
};

struct ClosureReport {
    std::vector<std::string> names;
    std::vector<TableEntry> table;
    bool closed = false;
    bool antisymmetric = true;
    bool jacobi = false;
    /// Index of the identity generator, dropped from the Killing form.
    std::optional<std::size_t> identity;
    std::optional<KillingForm> killing;
    std::string classification = "not closed";
};

/// (positive, negative, zero) eigenvalue counts of a symmetric rational
/// matrix. The characteristic polynomial has only real roots, so Descartes'
/// rule of signs counts positive roots exactly, with multiplicity.
inline std::array<int, 3> signature(const Matrix<Rational> &m) {
    const int n = static_cast<int>(m.size());
    Vec<Rational> c = characteristic_coefficients(m);
    int zero = 0;
    while (zero < n && c[zero].is_zero()) ++zero;
    auto variations = [&](bool flip) {
        std::vector<int> signs;
        for (int k = 0; k <= n; ++k) {
            int sg = c[k].sign();
            if (flip && k % 2 == 1) sg = -sg;
            signs.push_back(sg);
        }
        return detail::count_changes(signs);
    };
    return {variations(false), variations(true), zero};
}

inline std::string classify(const std::array<int, 3> &sig, std::size_t dim) {
    if (dim != 3) return "dimension " + std::to_string(dim);
    if (sig[2] != 0) return "degenerate";
    if (sig[1] == 3) return "so(3)";
    if (sig[0] == 3) return "positive definite";
    return "sl(2,R)";
}

/// Linear closure of a set of operators under a commutator, with coordinates
/// supplied by the caller (canonical coefficients, matrix of the action on a
/// basis, ...). Structure constants are checked for antisymmetry and Jacobi,
/// and the Killing form of the quotient by the identity is classified.
template <class Op>
ClosureReport closure_table(const std::vector<Op> &gens, const std::vector<std::string> &names,
                            const std::function<Op(const Op &, const Op &)> &bracket,
                            const std::function<Coordinates(const Op &)> &coords,
                            const std::function<std::string(const Op &)> &print,
                            std::optional<std::size_t> identity = std::nullopt,
                            const std::vector<Rational> &samples = {Rational::parse("1/3"), Rational::parse("-5/7")}) {
    ClosureReport rep;
    rep.names = names;
    rep.identity = identity;
    const std::size_t n = gens.size();
    std::vector<Coordinates> cg;
    for (const auto &g : gens) cg.push_back(coords(g));

    auto express = [&](const Op &c, TableEntry &t) {
        Coordinates target = coords(c);
        std::set<std::string> keys;
        for (const auto &m : cg)
            for (const auto &[k, v] : m) keys.insert(k);
        for (const auto &[k, v] : target) keys.insert(k);
        Matrix<ParamScalar> m;
        Vec<ParamScalar> rhs;
        for (const auto &k : keys) {
            Vec<ParamScalar> row;
            for (const auto &g : cg) {
                auto it = g.find(k);
                row.push_back(it == g.end() ? ParamScalar(0) : it->second);
            }
            m.push_back(std::move(row));
            auto it = target.find(k);
            rhs.push_back(it == target.end() ? ParamScalar(0) : it->second);
        }
        auto sol = solve(m, rhs, n);
        if (sol) {
            t.inside = true;
            t.coefficients = std::move(*sol);
            return;
        }
        t.residual = print(c);
        // first coordinate whose equation breaks consistency
        std::size_t idx = 0;
        for (const auto &k : keys) {
            ++idx;
            Matrix<ParamScalar> sub(m.begin(), m.begin() + idx);
            Vec<ParamScalar> srhs(rhs.begin(), rhs.begin() + idx);
            if (!solve(sub, srhs, n)) {
                t.residual_key = k;
                break;
            }
        }
    };

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> at;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            TableEntry t;
            t.i = i;
            t.j = j;
            express(bracket(gens[i], gens[j]), t);
            at[{i, j}] = rep.table.size();
            rep.table.push_back(std::move(t));
        }
    rep.closed = std::all_of(rep.table.begin(), rep.table.end(), [](const TableEntry &t) { return t.inside; });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto &a = rep.table[at[{i, j}]], &b = rep.table[at[{j, i}]];
            if (a.inside != b.inside) rep.antisymmetric = false;
            if (!a.inside || !b.inside) continue;
            for (std::size_t k = 0; k < n; ++k)
                if (a.coefficients[k] != -b.coefficients[k]) rep.antisymmetric = false;
        }
    if (!rep.closed) return rep;

    // C[i][j][k]: coefficient of g_k in [g_i, g_j].
    auto C = [&](std::size_t i, std::size_t j, std::size_t k) -> const ParamScalar & {
        return rep.table[at[{i, j}]].coefficients[k];
    };
    rep.jacobi = true;
    for (std::size_t i = 0; i < n && rep.jacobi; ++i)
        for (std::size_t j = 0; j < n && rep.jacobi; ++j)
            for (std::size_t k = 0; k < n && rep.jacobi; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    // [g_i,[g_j,g_k]] + [g_j,[g_k,g_i]] + [g_k,[g_i,g_j]]
                    ParamScalar s(0);
                    for (std::size_t p = 0; p < n; ++p) {
                        s += C(j, k, p) * C(i, p, l);
                        s += C(k, i, p) * C(j, p, l);
                        s += C(i, j, p) * C(k, p, l);
                    }
                    if (!s.is_zero()) {
                        rep.jacobi = false;
                        break;
                    }
                }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (!identity || i != *identity) keep.push_back(i);
    const std::size_t q = keep.size();
    // ad matrices on the quotient: (ad g_i)[l][k] = C(i, k, l)
    std::vector<Matrix<ParamScalar>> ad;
    for (std::size_t i : keep) {
        Matrix<ParamScalar> m(q, Vec<ParamScalar>(q, ParamScalar(0)));
        for (std::size_t l = 0; l < q; ++l)
            for (std::size_t k = 0; k < q; ++k) m[l][k] = C(i, keep[k], keep[l]);
        ad.push_back(std::move(m));
    }
    KillingForm kf;
    kf.matrix.assign(q, Vec<ParamScalar>(q, ParamScalar(0)));
    bool constant = true;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            kf.matrix[i][j] = trace(multiply(ad[i], ad[j]));
            if (!kf.matrix[i][j].is_constant()) constant = false;
        }
    auto at_value = [&](const std::optional<Rational> &a0) {
        Matrix<Rational> m(q, Vec<Rational>(q));
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j) m[i][j] = specialize(kf.matrix[i][j], a0.value_or(Rational(0)));
        return signature(m);
    };
    if (constant) {
        kf.signature = at_value(std::nullopt);
        rep.classification = classify(*kf.signature, q);
    } else {
        std::optional<std::string> common;
        for (const auto &a0 : samples) {
            auto sig = at_value(a0);
            kf.samples.emplace_back(a0, sig);
            std::string c = classify(sig, q);
            if (!common) common = c;
            else if (*common != c) common = "parameter dependent";
        }
        rep.classification = common.value_or("parameter dependent");
    }
    rep.killing = std::move(kf);
    return rep;
}

/// Coordinates of the action on the basis of s: key "e>out".
inline Coordinates action_coordinates(const DiffOp &op, const V1Space &s) {
    Coordinates out;
    for (const auto &e : s.basis()) {
        const QuasiPoly img = act_on(op, s, e);
        for (const auto &[f, c] : img.terms()) out.emplace(e.to_string() + ">" + f.to_string(), c);
    }
    return out;
}

/// Closure of DiffOp generators as maps on s.
inline ClosureReport closure_on_space(const std::vector<DiffOp> &gens, const std::vector<std::string> &names, const V1Space &s,
                                      std::optional<std::size_t> identity = std::nullopt) {
    return closure_table<DiffOp>(
        gens, names, [](const DiffOp &a, const DiffOp &b) { return commutator(a, b); },
        [&s](const DiffOp &op) { return action_coordinates(op, s); }, [](const DiffOp &op) { return op.to_string(); }, identity);
}

} // namespace qes
