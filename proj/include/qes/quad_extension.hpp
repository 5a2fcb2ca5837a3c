#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qes/algebra_probe.hpp"

namespace qes {

/// P_n + f P_m with f^2 = r. The symbol a of the parameter field plays the
/// role of the preset's parameter (lambda or k^2).
class QuadSpace {
public:
    QuadSpace(RatFunc r, int n, int m, std::string label = "")
        : r_(std::move(r)), n_(n), m_(m), label_(std::move(label)) {
        if (n < 0 || m < 0) throw PreconditionViolation("space dimensions must be nonnegative");
        if (r_.is_zero()) throw PreconditionViolation("r must be nonzero");
        if (is_perfect_square(r_)) throw PreconditionViolation("r = " + r_.to_string() + " is a perfect square");
    }

    const RatFunc &r() const { return r_; }
    int n() const { return n_; }
    int m() const { return m_; }
    std::size_t dimension() const { return static_cast<std::size_t>(n_ + m_ + 2); }

    std::string to_string() const {
        if (!label_.empty()) return label_;
        return "Quad(r=" + r_.to_string() + "," + std::to_string(n_) + "," + std::to_string(m_) + ")";
    }

    QuadSpace specialized(const Rational &a0) const {
        std::string label = label_;
        if (!label.empty()) {
            // presets print their parameter last
            auto comma = label.rfind(',');
            label = label.substr(0, comma + 1) + a0.to_string() + ")";
        }
        return QuadSpace(specialize(r_, a0), n_, m_, label);
    }

    /// Basis labels in the order used by every report: x^0..x^n, then f*x^0..f*x^m.
    std::vector<std::string> basis_labels() const {
        std::vector<std::string> out;
        for (int i = 0; i <= n_; ++i) out.push_back(monomial_label(i, false));
        for (int j = 0; j <= m_; ++j) out.push_back(monomial_label(j, true));
        return out;
    }

    static std::string monomial_label(int k, bool f) {
        std::string x = k == 0 ? "1" : k == 1 ? "x" : "x^" + std::to_string(k);
        return f ? (k == 0 ? "f" : "f*" + x) : x;
    }

private:
    RatFunc r_;
    int n_, m_;
    std::string label_;
};

namespace detail {
inline std::string param_text(const ParamScalar &v, const char *name) {
    return v == param_a() ? std::string(name) : v.to_string();
}
inline RatFunc linear_factor(const ParamScalar &c) {
    // 1 - c x
    return RatFunc(XPoly(std::vector<ParamScalar>{ParamScalar(1), -c}));
}
} // namespace detail

/// r = (1-x)(1-lambda x), m = n-1.
inline QuadSpace sqrt_p2(int n, const ParamScalar &lambda) {
    if (n < 1) throw PreconditionViolation("SqrtP2 needs n >= 1");
    return QuadSpace(detail::linear_factor(ParamScalar(1)) * detail::linear_factor(lambda), n, n - 1,
                     "SqrtP2(" + std::to_string(n) + "," + detail::param_text(lambda, "lambda") + ")");
}

/// r = (1-x)/(1-lambda x), m = n.
inline QuadSpace ratio_sqrt(int n, const ParamScalar &lambda) {
    return QuadSpace(detail::linear_factor(ParamScalar(1)) / detail::linear_factor(lambda), n, n,
                     "RatioSqrt(" + std::to_string(n) + "," + detail::param_text(lambda, "lambda") + ")");
}

/// Lame space in the variable x = sn^2: f = cn dn, r = (1-x)(1-k^2 x), m = n-1.
inline QuadSpace lame_space(int n, const ParamScalar &k2) {
    if (n < 1) throw PreconditionViolation("Lame needs n >= 1");
    return QuadSpace(detail::linear_factor(ParamScalar(1)) * detail::linear_factor(k2), n, n - 1,
                     "Lame(" + std::to_string(n) + "," + detail::param_text(k2, "k2") + ")");
}

/// 2x2 matrix of operators acting on (p, q), read as p + f q.
class MatOp {
public:
    MatOp() = default;
    MatOp(DiffOp a, DiffOp b, DiffOp c, DiffOp d) : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    static MatOp identity() { return diag(DiffOp::identity()); }
    static MatOp diag(const DiffOp &a) { return MatOp(a, DiffOp(), DiffOp(), a); }

    const DiffOp &at(int i, int j) const { return e_[static_cast<std::size_t>(2 * i + j)]; }

    MatOp &operator+=(const MatOp &o) {
        for (std::size_t k = 0; k < 4; ++k) e_[k] += o.e_[k];
        return *this;
    }
    MatOp &operator-=(const MatOp &o) {
        for (std::size_t k = 0; k < 4; ++k) e_[k] -= o.e_[k];
        return *this;
    }
    friend MatOp operator+(MatOp l, const MatOp &r) { return l += r; }
    friend MatOp operator-(MatOp l, const MatOp &r) { return l -= r; }
    MatOp operator-() const { return MatOp() - *this; }
    friend MatOp operator*(const MatOp &l, const MatOp &r) {
        MatOp out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                out.e_[static_cast<std::size_t>(2 * i + j)] = l.at(i, 0) * r.at(0, j) + l.at(i, 1) * r.at(1, j);
        return out;
    }
    MatOp scaled(const RatFunc &c) const {
        MatOp out;
        for (std::size_t k = 0; k < 4; ++k) out.e_[k] = e_[k].scaled(c);
        return out;
    }
    MatOp specialized(const Rational &a0) const {
        MatOp out;
        for (std::size_t k = 0; k < 4; ++k) out.e_[k] = e_[k].specialized(a0);
        return out;
    }
    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](const DiffOp &d) { return d.is_zero(); });
    }
    friend bool operator==(const MatOp &, const MatOp &) = default;

    std::string to_string() const {
        auto s = [](const DiffOp &d) { return d.is_zero() ? std::string("0") : d.to_string(); };
        return "[[" + s(e_[0]) + ", " + s(e_[1]) + "], [" + s(e_[2]) + ", " + s(e_[3]) + "]]";
    }

private:
    std::array<DiffOp, 4> e_;
};

inline MatOp commutator(const MatOp &a, const MatOp &b) { return a * b - b * a; }

/// r'/(2r), the logarithmic derivative of f.
inline RatFunc log_derivative_f(const RatFunc &r) { return r.derivative() / (RatFunc(2) * r); }

inline MatOp lift_x(const QuadSpace &) { return MatOp::diag(DiffOp::multiplication(var_x())); }
inline MatOp lift_d(const QuadSpace &s) {
    return MatOp(DiffOp::d(), DiffOp(), DiffOp(), DiffOp::d() + DiffOp::multiplication(log_derivative_f(s.r())));
}
inline MatOp lift_f(const QuadSpace &s) {
    return MatOp(DiffOp(), DiffOp::multiplication(s.r()), DiffOp::identity(), DiffOp());
}
inline MatOp lift_mul(const RatFunc &c) { return MatOp::diag(DiffOp::multiplication(c)); }

/// Image of an f-free operator sum c_j d^j: sum lift(c_j) lift(d)^j.
inline MatOp lift(const DiffOp &op, const QuadSpace &s) {
    if (!op.shift().is_zero()) throw PreconditionViolation("x^(s*a) prefactors have no quadratic-extension lift");
    const MatOp d = lift_d(s);
    MatOp out, pw = MatOp::identity();
    int at = 0;
    for (const auto &[j, c] : op.terms()) {
        for (; at < j; ++at) pw = pw * d;
        out += lift_mul(c) * pw;
    }
    return out;
}

using QuadPair = std::pair<RatFunc, RatFunc>;

inline QuadPair act(const MatOp &M, const XPoly &p, const XPoly &q) {
    return {act_poly(M.at(0, 0), p) + act_poly(M.at(0, 1), q), act_poly(M.at(1, 0), p) + act_poly(M.at(1, 1), q)};
}

namespace detail {
inline XPoly x_mono(int k) { return XPoly::monomial(ParamScalar(1), k); }
/// Image of the idx-th basis vector of s.
inline QuadPair act_basis(const MatOp &M, const QuadSpace &s, std::size_t idx) {
    const int n = s.n();
    if (static_cast<int>(idx) <= n) return act(M, x_mono(static_cast<int>(idx)), XPoly());
    return act(M, XPoly(), x_mono(static_cast<int>(idx) - n - 1));
}
} // namespace detail

inline InvarianceReport check_invariance_quad(const MatOp &M, const QuadSpace &s) {
    InvarianceReport rep;
    const auto labels = s.basis_labels();
    for (std::size_t idx = 0; idx < labels.size(); ++idx) {
        QuadPair out = detail::act_basis(M, s, idx);
        const std::array<const RatFunc *, 2> comps{&out.first, &out.second};
        for (int c = 0; c < 2; ++c) {
            const RatFunc &v = *comps[static_cast<std::size_t>(c)];
            const int bound = c == 0 ? s.n() : s.m();
            if (!v.is_polynomial()) {
                rep.witnesses.push_back({labels[idx], (c == 0 ? "(" : "f*(") + v.to_string() + ")", v.numerator().leading()});
                continue;
            }
            const auto &co = v.numerator().coefficients();
            for (std::size_t k = static_cast<std::size_t>(bound) + 1; k < co.size(); ++k)
                if (!co[k].is_zero()) rep.witnesses.push_back({labels[idx], QuadSpace::monomial_label(static_cast<int>(k), c == 1), co[k]});
        }
    }
    rep.verdict = rep.witnesses.empty();
    return rep;
}

/// alpha + beta d + f (gamma + delta d), with its lift.
struct QuadOperator {
    RatFunc alpha, beta, gamma, delta;
    MatOp mat;

    static QuadOperator make(const QuadSpace &s, RatFunc al, RatFunc be, RatFunc ga, RatFunc de) {
        const MatOp d = lift_d(s), f = lift_f(s);
        MatOp m = lift_mul(al) + lift_mul(be) * d + f * (lift_mul(ga) + lift_mul(de) * d);
        return {std::move(al), std::move(be), std::move(ga), std::move(de), std::move(m)};
    }

    std::string to_string() const {
        auto sum = [](const RatFunc &c0, const RatFunc &c1) {
            std::string out;
            if (!c0.is_zero()) out = "(" + c0.to_string() + ")";
            if (!c1.is_zero()) out += (out.empty() ? "" : " + ") + ("(" + c1.to_string() + ")*d");
            return out;
        };
        std::string out = sum(alpha, beta), fpart = sum(gamma, delta);
        if (!fpart.empty()) out += (out.empty() ? "" : " + ") + ("f*(" + fpart + ")");
        return out.empty() ? "0" : out;
    }
};

namespace detail {

inline XPoly lcm(const XPoly &a, const XPoly &b) { return (a / gcd(a, b)) * b; }

/// Rows forcing sum_u c_u img_u to be a polynomial of degree <= bound.
inline void polynomial_constraints(const std::vector<RatFunc> &imgs, int bound, Matrix<ParamScalar> &rows) {
    XPoly L(ParamScalar(1));
    for (const auto &v : imgs)
        if (!v.is_zero()) L = lcm(L, v.denominator()).monic();
    std::vector<XPoly> quo, rem;
    std::size_t width = 0;
    for (const auto &v : imgs) {
        XPoly num = v.is_zero() ? XPoly() : v.numerator() * (L / v.denominator());
        auto [q, r] = num.divmod(L);
        width = std::max({width, q.size(), r.size()});
        quo.push_back(std::move(q));
        rem.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < width; ++k) {
        Vec<ParamScalar> rr, qq;
        bool rnz = false, qnz = false;
        for (std::size_t u = 0; u < imgs.size(); ++u) {
            rr.push_back(rem[u].coefficient(static_cast<int>(k)));
            rnz = rnz || !rr.back().is_zero();
            qq.push_back(static_cast<int>(k) > bound ? quo[u].coefficient(static_cast<int>(k)) : ParamScalar(0));
            qnz = qnz || !qq.back().is_zero();
        }
        if (rnz) rows.push_back(std::move(rr));
        if (qnz) rows.push_back(std::move(qq));
    }
}

} // namespace detail

/// Basis of the first-order operators alpha + beta d + f (gamma + delta d),
/// coefficients polynomials of degree <= deg, that preserve s; the identity
/// is removed. The constant term of alpha is the last unknown, so the
/// identity is always the last free column and no other basis vector uses it.
inline std::vector<QuadOperator> preserving_first_order(const QuadSpace &s, int deg = 2) {
    struct Unknown {
        int slot, power;
    };
    std::vector<Unknown> unknowns;
    for (int slot = 0; slot < 4; ++slot)
        for (int k = 0; k <= deg; ++k)
            if (slot != 0 || k != 0) unknowns.push_back({slot, k});
    unknowns.push_back({0, 0});
    auto part = [&](const Unknown &u, int slot) { return u.slot == slot ? x_power(u.power) : RatFunc(); };
    std::vector<MatOp> terms;
    for (const auto &u : unknowns)
        terms.push_back(QuadOperator::make(s, part(u, 0), part(u, 1), part(u, 2), part(u, 3)).mat);
    Matrix<ParamScalar> rows;
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        std::vector<RatFunc> p, q;
        for (const auto &t : terms) {
            QuadPair o = detail::act_basis(t, s, idx);
            p.push_back(o.first);
            q.push_back(o.second);
        }
        detail::polynomial_constraints(p, s.n(), rows);
        detail::polynomial_constraints(q, s.m(), rows);
    }
    std::vector<QuadOperator> out;
    for (const auto &v : nullspace(rows, unknowns.size())) {
        if (!v.back().is_zero()) continue; // identity
        std::array<XPoly, 4> c;
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            if (!v[u].is_zero()) c[static_cast<std::size_t>(unknowns[u].slot)] += XPoly::monomial(v[u], unknowns[u].power);
        out.push_back(QuadOperator::make(s, RatFunc(c[0]), RatFunc(c[1]), RatFunc(c[2]), RatFunc(c[3])));
    }
    return out;
}

/// The three-dimensional preserving family.
inline std::vector<QuadOperator> s_generators(const QuadSpace &s) {
    auto fam = preserving_first_order(s);
    if (fam.size() < 3) throw Error("no three-dimensional family found for " + s.to_string());
    for (const auto &g : fam)
        if (!check_invariance_quad(g.mat, s).verdict) throw Error("search returned a non-preserving operator: " + g.to_string());
    return fam;
}

/// Coordinates of the action on the basis: key "<basis>:<component>:<power>".
inline Coordinates quad_coordinates(const MatOp &M, const QuadSpace &s) {
    Coordinates out;
    for (std::size_t idx = 0; idx < s.dimension(); ++idx) {
        QuadPair o = detail::act_basis(M, s, idx);
        const std::array<const RatFunc *, 2> comps{&o.first, &o.second};
        for (int c = 0; c < 2; ++c) {
            const RatFunc &v = *comps[static_cast<std::size_t>(c)];
            if (!v.is_polynomial()) throw PreconditionViolation("operator does not preserve " + s.to_string());
            const auto &co = v.numerator().coefficients();
            for (std::size_t k = 0; k < co.size(); ++k)
                if (!co[k].is_zero()) out.emplace(std::to_string(idx) + ":" + std::to_string(c) + ":" + std::to_string(k), co[k]);
        }
    }
    return out;
}

/// Closure of gens together with the identity (index 0 of the table) as maps
/// on s. The Killing form is sampled at the given parameter values.
inline ClosureReport closure_check(const std::vector<MatOp> &gens, const std::vector<std::string> &names, const QuadSpace &s,
                                   const std::vector<Rational> &samples = {Rational::parse("1/4"), Rational::parse("1/2"),
                                                                           Rational::parse("3/4")}) {
    std::vector<MatOp> all{MatOp::identity()};
    all.insert(all.end(), gens.begin(), gens.end());
    std::vector<std::string> all_names{"1"};
    all_names.insert(all_names.end(), names.begin(), names.end());
    return closure_table<MatOp>(
        all, all_names, [](const MatOp &a, const MatOp &b) { return commutator(a, b); },
        [&s](const MatOp &m) { return quad_coordinates(m, s); }, [](const MatOp &m) { return m.to_string(); }, 0, samples);
}

/// Printed first-order operators next to their verified counterparts.
struct PrintedCheck {
    std::string name;
    std::string printed;
    bool invariant = false;
    std::optional<Witness> witness;
    bool in_family = false;
    /// Form that does preserve the space, when the printed one does not.
    std::string corrected;
};

struct SopReport {
    std::vector<QuadOperator> family;
    std::vector<PrintedCheck> checks;
};

/// Compares S1 = n x + p2 d, S2 = f (n x - x d), S3 = f d against the search
/// result. p2 is taken as the polynomial part of r for SqrtP2 and as
/// (1-x)(1-lambda x) for RatioSqrt.
inline SopReport sop_crosscheck(const QuadSpace &s, const ParamScalar &lambda) {
    SopReport rep;
    rep.family = s_generators(s);
    const RatFunc x = var_x(), n(ParamScalar(s.n()));
    const RatFunc p2 = detail::linear_factor(ParamScalar(1)) * detail::linear_factor(lambda);
    std::vector<MatOp> fam;
    for (const auto &g : rep.family) fam.push_back(g.mat);
    fam.push_back(MatOp::identity());
    std::vector<Coordinates> fc;
    for (const auto &g : fam) fc.push_back(quad_coordinates(g, s));

    auto member = [&](const MatOp &m) {
        Coordinates t;
        try {
            t = quad_coordinates(m, s);
        } catch (const PreconditionViolation &) {
            return false;
        }
        std::set<std::string> keys;
        for (const auto &c : fc)
            for (const auto &[k, v] : c) keys.insert(k);
        for (const auto &[k, v] : t) keys.insert(k);
        Matrix<ParamScalar> a;
        Vec<ParamScalar> b;
        for (const auto &k : keys) {
            Vec<ParamScalar> row;
            for (const auto &c : fc) {
                auto it = c.find(k);
                row.push_back(it == c.end() ? ParamScalar(0) : it->second);
            }
            a.push_back(std::move(row));
            auto it = t.find(k);
            b.push_back(it == t.end() ? ParamScalar(0) : it->second);
        }
        return solve(a, b, fam.size()).has_value();
    };

    struct Candidate {
        std::string name;
        QuadOperator printed;
        std::optional<QuadOperator> corrected;
    };
    std::vector<Candidate> cands;
    cands.push_back({"S1", QuadOperator::make(s, n * x, p2, RatFunc(), RatFunc()),
                     QuadOperator::make(s, -(n * RatFunc(lambda) * x), p2, RatFunc(), RatFunc())});
    cands.push_back({"S2", QuadOperator::make(s, RatFunc(), RatFunc(), n * x, -x), QuadOperator::make(s, RatFunc(), RatFunc(), -n, x)});
    cands.push_back({"S3", QuadOperator::make(s, RatFunc(), RatFunc(), RatFunc(), RatFunc(1)), std::nullopt});
    for (auto &c : cands) {
        PrintedCheck pc;
        pc.name = c.name;
        pc.printed = c.printed.to_string();
        InvarianceReport inv = check_invariance_quad(c.printed.mat, s);
        pc.invariant = inv.verdict;
        if (!inv.witnesses.empty()) pc.witness = inv.witnesses.front();
        pc.in_family = pc.invariant && member(c.printed.mat);
        if (!pc.invariant && c.corrected && check_invariance_quad(c.corrected->mat, s).verdict && member(c.corrected->mat))
            pc.corrected = c.corrected->to_string();
        rep.checks.push_back(std::move(pc));
    }
    return rep;
}

// Lame sector.

/// N = (4n+1)/2 in the x = sn^2 variable.
inline Rational lame_N(int n) { return Rational(mpz_class(4 * n + 1), mpz_class(2)); }

/// g^{-1} (-d^2/dz^2 + N(N+1) k^2 sn^2) g with g = sqrt(cn + dn), written on
/// (p, q) ~ p + cn dn q with x = sn^2. With T = f d (so d/dz = 2 sn T):
///   d^2/dz^2 = 4 x T^2 + 2 f^2 d,
///   2 (g'/g) d/dz = 2 (f - 1) T,
///   -(g''/g) = (1 + k^2)/4 - 3 k^2 x / 4.
inline MatOp lame_pullback(int n, const ParamScalar &k2) {
    const QuadSpace s = lame_space(n, k2);
    const MatOp F = lift_f(s), d = lift_d(s), X = lift_x(s), I = MatOp::identity();
    const MatOp T = F * d;
    const MatOp second = X.scaled(RatFunc(4)) * T * T + (F * F * d).scaled(RatFunc(2));
    const MatOp drift = (F - I).scaled(RatFunc(2)) * T;
    const ParamScalar N(lame_N(n));
    const RatFunc gauge = RatFunc((ParamScalar(1) + k2) / ParamScalar(4)) - RatFunc(ParamScalar(3) * k2 / ParamScalar(4)) * var_x();
    const RatFunc potential = RatFunc(N * (N + ParamScalar(1)) * k2) * var_x();
    return -second - drift + lift_mul(gauge + potential);
}

struct Spectrum {
    /// Column i holds the image of the i-th basis vector.
    Matrix<ParamScalar> matrix;
    /// det(E - M), monic in E.
    Polynomial<ParamScalar> charpoly;
};

inline Spectrum algebraic_spectrum(const MatOp &M, const QuadSpace &s) {
    InvarianceReport inv = check_invariance_quad(M, s);
    if (!inv.verdict) throw PreconditionViolation("operator does not preserve " + s.to_string());
    const std::size_t dim = s.dimension();
    Spectrum sp;
    sp.matrix.assign(dim, Vec<ParamScalar>(dim, ParamScalar(0)));
    for (std::size_t idx = 0; idx < dim; ++idx) {
        QuadPair o = detail::act_basis(M, s, idx);
        for (int i = 0; i <= s.n(); ++i) sp.matrix[static_cast<std::size_t>(i)][idx] = o.first.numerator().coefficient(i);
        for (int j = 0; j <= s.m(); ++j) sp.matrix[static_cast<std::size_t>(s.n() + 1 + j)][idx] = o.second.numerator().coefficient(j);
    }
    sp.charpoly = Polynomial<ParamScalar>(characteristic_coefficients(sp.matrix));
    return sp;
}

struct RootCount {
    int degree = 0;
    int real_distinct = 0;
    bool squarefree = false;
};

/// Exact Sturm count of the characteristic polynomial at a = a0.
inline RootCount real_roots_at(const Polynomial<ParamScalar> &charpoly, const Rational &a0) {
    std::vector<Rational> c;
    for (const auto &v : charpoly.coefficients()) c.push_back(specialize(v, a0));
    RPoly p(std::move(c));
    return {p.degree().value(), count_real_roots(p), is_squarefree(p)};
}

} // namespace qes
